//! Breadth-first layers of the Cayley graph, deduplicated by canonical matrix.
//!
//! # File format
//!
//! Frontier files are UTF-8 text, one record per line, fields separated by a
//! single space:
//!
//! ```text
//! longreid-frontier 1
//! generators <a11> <a12> <a21> <a22> <b11> <b12> <b21> <b22>
//! layer <L>
//! previous <count>
//! <m11> <m12> <m21> <m22> <word>      (count lines, layer L-1)
//! current <count>
//! <m11> <m12> <m21> <m22> <word>      (count lines, layer L)
//! end
//! ```
//!
//! Entries are canonical decimal integers; words are flat strings, with `.`
//! standing for the empty word. Both layers are sorted by word. Layer `L − 1`
//! is stored because the next layer is computed by excluding neighbours that
//! already lie in layers `L − 1` and `L`.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};
use std::fs;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::exact::ProjectiveMatrix;
use crate::family::Generators;
use crate::words::{Letter, Word};

pub const FRONTIER_MAGIC: &str = "longreid-frontier";
pub const FRONTIER_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum FrontierError {
    #[error("frontier I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("unsupported frontier format version {found} (expected {FRONTIER_VERSION})")]
    VersionMismatch { found: String },
    #[error("corrupt frontier file at line {line}: {reason}")]
    Corrupt { line: usize, reason: String },
    #[error("frontier was built from different generators")]
    GeneratorMismatch,
}

/// A group element with the shortlex-least word reaching it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    pub matrix: ProjectiveMatrix,
    pub word: Word,
}

impl Element {
    pub fn identity() -> Self {
        Self {
            matrix: ProjectiveMatrix::identity(),
            word: Word::new(),
        }
    }

    /// Rough heap footprint, for the memory budget.
    pub fn approx_bytes(&self) -> u64 {
        const FIXED: u64 = 4 * 32 + 24 + 48;
        FIXED + self.matrix.bit_size().div_ceil(8) + self.word.len() as u64
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frontier {
    pub generators: Generators,
    pub layer: usize,
    /// Elements at distance `layer - 1`, sorted by word.
    pub previous: Vec<Element>,
    /// Elements at distance `layer`, sorted by word.
    pub current: Vec<Element>,
}

impl Frontier {
    pub fn initial(generators: Generators) -> Self {
        Self {
            generators,
            layer: 0,
            previous: Vec::new(),
            current: vec![Element::identity()],
        }
    }

    pub fn approx_bytes(&self) -> u64 {
        self.previous
            .iter()
            .chain(&self.current)
            .map(Element::approx_bytes)
            .sum()
    }

    /// The next layer. Workers extend disjoint slices of the current layer
    /// and merge by keeping the least word per matrix, so the result does not
    /// depend on scheduling.
    pub fn expand(self) -> Frontier {
        let next = next_layer(&self.generators, &self.previous, &self.current);
        Frontier {
            generators: self.generators,
            layer: self.layer + 1,
            previous: self.current,
            current: next,
        }
    }

    pub fn save(&self, path: &Path) -> Result<(), FrontierError> {
        let tmp = path.with_extension("tmp");
        {
            let mut out = BufWriter::new(fs::File::create(&tmp)?);
            self.write_to(&mut out)?;
            out.flush()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Frontier, FrontierError> {
        let file = fs::File::open(path)?;
        Self::read_from(BufReader::new(file))
    }

    pub fn write_to(&self, out: &mut impl Write) -> io::Result<()> {
        writeln!(out, "{FRONTIER_MAGIC} {FRONTIER_VERSION}")?;
        let a = self.generators.gen_a().entries();
        let b = self.generators.gen_b().entries();
        writeln!(
            out,
            "generators {} {} {} {} {} {} {} {}",
            a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]
        )?;
        writeln!(out, "layer {}", self.layer)?;
        for (tag, elements) in [("previous", &self.previous), ("current", &self.current)] {
            writeln!(out, "{tag} {}", elements.len())?;
            for e in elements {
                let m = e.matrix.entries();
                let word = if e.word.is_empty() {
                    ".".to_string()
                } else {
                    e.word.to_string()
                };
                writeln!(out, "{} {} {} {} {word}", m[0], m[1], m[2], m[3])?;
            }
        }
        writeln!(out, "end")
    }

    pub fn read_from(input: impl BufRead) -> Result<Frontier, FrontierError> {
        let mut lines = LineReader {
            inner: input.lines(),
            number: 0,
        };
        let header = lines.next_line()?;
        let version = header
            .strip_prefix(FRONTIER_MAGIC)
            .map(str::trim)
            .ok_or_else(|| lines.corrupt("missing frontier header"))?;
        if version != FRONTIER_VERSION.to_string() {
            return Err(FrontierError::VersionMismatch {
                found: version.to_string(),
            });
        }

        let gens_line = lines.next_line()?;
        let fields: Vec<&str> = gens_line.split(' ').collect();
        if fields.len() != 9 || fields[0] != "generators" {
            return Err(lines.corrupt("expected generators line"));
        }
        let parse_matrix = |f: &[&str]| ProjectiveMatrix::from_decimal([f[0], f[1], f[2], f[3]]);
        let gen_a = parse_matrix(&fields[1..5]).map_err(|e| lines.corrupt(&e.to_string()))?;
        let gen_b = parse_matrix(&fields[5..9]).map_err(|e| lines.corrupt(&e.to_string()))?;
        let generators = Generators::new(gen_a, gen_b);

        let layer: usize = lines.tagged_count("layer")?;
        let previous = lines.elements("previous", &generators, layer.checked_sub(1))?;
        let current = lines.elements("current", &generators, Some(layer))?;
        if lines.next_line()? != "end" {
            return Err(lines.corrupt("expected end marker"));
        }
        if layer == 0 && current != vec![Element::identity()] {
            return Err(lines.corrupt("layer 0 must be the identity"));
        }
        Ok(Frontier {
            generators,
            layer,
            previous,
            current,
        })
    }
}

struct LineReader<L> {
    inner: L,
    number: usize,
}

impl<L: Iterator<Item = io::Result<String>>> LineReader<L> {
    fn corrupt(&self, reason: &str) -> FrontierError {
        FrontierError::Corrupt {
            line: self.number,
            reason: reason.to_string(),
        }
    }

    fn next_line(&mut self) -> Result<String, FrontierError> {
        self.number += 1;
        match self.inner.next() {
            Some(line) => Ok(line?),
            None => Err(self.corrupt("unexpected end of file")),
        }
    }

    fn tagged_count(&mut self, tag: &str) -> Result<usize, FrontierError> {
        let line = self.next_line()?;
        line.strip_prefix(tag)
            .and_then(|rest| rest.strip_prefix(' '))
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| self.corrupt(&format!("expected `{tag} <n>`")))
    }

    /// Reads a counted block, checking canonical form, word length, sort
    /// order, and that each word evaluates to its matrix.
    fn elements(
        &mut self,
        tag: &str,
        generators: &Generators,
        length: Option<usize>,
    ) -> Result<Vec<Element>, FrontierError> {
        let count = self.tagged_count(tag)?;
        if length.is_none() && count != 0 {
            return Err(self.corrupt("layer 0 has no previous layer"));
        }
        let mut out: Vec<Element> = Vec::with_capacity(count.min(1 << 20));
        for _ in 0..count {
            let line = self.next_line()?;
            let fields: Vec<&str> = line.split(' ').collect();
            if fields.len() != 5 {
                return Err(self.corrupt("expected four entries and a word"));
            }
            let matrix =
                ProjectiveMatrix::from_decimal([fields[0], fields[1], fields[2], fields[3]])
                    .map_err(|e| self.corrupt(&e.to_string()))?;
            let canonical = matrix
                .entries()
                .iter()
                .zip(&fields[..4])
                .all(|(e, f)| e.to_string() == *f);
            if !canonical {
                return Err(self.corrupt("matrix is not in canonical form"));
            }
            let word = if fields[4] == "." {
                Word::new()
            } else {
                fields[4]
                    .parse::<Word>()
                    .map_err(|e| self.corrupt(&e.to_string()))?
            };
            if Some(word.len()) != length {
                return Err(self.corrupt("word length does not match layer"));
            }
            if out.last().is_some_and(|prev| prev.word >= word) {
                return Err(self.corrupt("elements are not sorted by word"));
            }
            if generators.evaluate(&word) != matrix {
                return Err(self.corrupt("word does not evaluate to its matrix"));
            }
            out.push(Element { matrix, word });
        }
        Ok(out)
    }
}

fn next_layer(gens: &Generators, previous: &[Element], current: &[Element]) -> Vec<Element> {
    let seen: HashSet<&ProjectiveMatrix> =
        previous.iter().chain(current).map(|e| &e.matrix).collect();
    let merged = current
        .par_iter()
        .fold(
            HashMap::new,
            |mut acc: HashMap<ProjectiveMatrix, Word>, e| {
                for letter in Letter::ALL {
                    // Backtracking lands in the previous layer.
                    if e.word.last() == Some(letter.inverse()) {
                        continue;
                    }
                    let m = e.matrix.mul(gens.image(letter));
                    if seen.contains(&m) {
                        continue;
                    }
                    insert_min(&mut acc, m, e.word.extended(letter));
                }
                acc
            },
        )
        .reduce(HashMap::new, |mut a, b| {
            let (mut big, small) = if a.len() >= b.len() {
                (a, b)
            } else {
                (b, std::mem::take(&mut a))
            };
            for (m, w) in small {
                insert_min(&mut big, m, w);
            }
            big
        });
    let mut layer: Vec<Element> = merged
        .into_iter()
        .map(|(matrix, word)| Element { matrix, word })
        .collect();
    layer.par_sort_unstable_by(|x, y| x.word.cmp(&y.word));
    layer
}

// All candidate words in one layer have equal length, so `<` is shortlex.
fn insert_min(map: &mut HashMap<ProjectiveMatrix, Word>, m: ProjectiveMatrix, w: Word) {
    match map.entry(m) {
        Entry::Occupied(mut o) => {
            if w < *o.get() {
                o.insert(w);
            }
        }
        Entry::Vacant(v) => {
            v.insert(w);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::RepFamily;

    fn long_reid() -> Generators {
        RepFamily::long_reid().generators().clone()
    }

    fn round_trip(f: &Frontier) -> Frontier {
        let mut buf = Vec::new();
        f.write_to(&mut buf).unwrap();
        Frontier::read_from(&buf[..]).unwrap()
    }

    #[test]
    fn initial_round_trip() {
        let f = Frontier::initial(long_reid());
        assert_eq!(round_trip(&f), f);
    }

    #[test]
    fn layer_three_round_trip() {
        let mut f = Frontier::initial(long_reid());
        for _ in 0..3 {
            f = f.expand();
        }
        assert_eq!(f.layer, 3);
        let back = round_trip(&f);
        assert_eq!(back.current.len(), f.current.len());
        assert_eq!(back, f);
    }

    #[test]
    fn first_layers_of_long_reid() {
        let f = Frontier::initial(long_reid()).expand();
        let words: Vec<String> = f.current.iter().map(|e| e.word.to_string()).collect();
        assert_eq!(words, ["a", "A", "b", "B"]);
        let f = f.expand();
        assert_eq!(f.current.len(), 12);
        assert!(f.current.windows(2).all(|w| w[0].word < w[1].word));
    }

    #[test]
    fn truncated_file_is_corrupt() {
        let mut f = Frontier::initial(long_reid());
        for _ in 0..2 {
            f = f.expand();
        }
        let mut buf = Vec::new();
        f.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let cut = &text[..text.len() / 2];
        assert!(matches!(
            Frontier::read_from(cut.as_bytes()),
            Err(FrontierError::Corrupt { .. })
        ));
        let no_end = text.trim_end().trim_end_matches("end");
        assert!(matches!(
            Frontier::read_from(no_end.as_bytes()),
            Err(FrontierError::Corrupt { .. })
        ));
    }

    #[test]
    fn version_mismatch_is_distinguished() {
        let mut buf = Vec::new();
        Frontier::initial(long_reid()).write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap().replacen(" 1\n", " 2\n", 1);
        match Frontier::read_from(text.as_bytes()) {
            Err(FrontierError::VersionMismatch { found }) => assert_eq!(found, "2"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tampered_word_is_corrupt() {
        let f = Frontier::initial(long_reid()).expand();
        let mut buf = Vec::new();
        f.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf)
            .unwrap()
            .replace("82 2 9 1 b", "82 2 9 1 B");
        assert!(matches!(
            Frontier::read_from(text.as_bytes()),
            Err(FrontierError::Corrupt { .. })
        ));
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("frontier.txt");
        let f = Frontier::initial(long_reid()).expand().expand();
        f.save(&path).unwrap();
        assert_eq!(Frontier::load(&path).unwrap(), f);
        assert!(matches!(
            Frontier::load(&dir.path().join("missing")),
            Err(FrontierError::Io(_))
        ));
    }
}
