//! Search for improperness witnesses: nontrivial elements of the generated
//! group that are integral with determinant ±1 (so fix the base vertex of
//! every tree) and have infinite order.
//!
//! Two strategies produce the same element set for a given `max_length`:
//!
//! * breadth-first enumeration of the Cayley graph by word length,
//!   deduplicated by canonical matrix, which quotients by every relation of
//!   the represented group;
//! * meet-in-the-middle: enumerate the ball of radius `⌈L/2⌉`, bucket its
//!   elements by the tuple of vertices `g · base`, and form `g⁻¹h` for
//!   colliding pairs. `g⁻¹h` fixes every base vertex iff `g` and `h` move the
//!   base vertices to the same place, so collisions are exactly the
//!   candidates.
//!
//! Determinants of group elements are supported on the primes dividing the
//! generator determinants; those primes are the trees searched over.

mod frontier;

pub use frontier::{Element, Frontier, FrontierError, FRONTIER_MAGIC, FRONTIER_VERSION};

use std::collections::HashMap;
use std::io;
use std::path::PathBuf;

use num_traits::One;

use crate::exact::{BigRational, ProjectiveMatrix};
use crate::family::{FamilyError, Generators, RepFamily};
use crate::tree::{vertex_tuple, PrimeContext, VertexKey};
use crate::witness::{classify_order, WitnessRecord};
use crate::words::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Bfs,
    Mitm,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub max_length: usize,
    pub mode: SearchMode,
    pub generators: Generators,
    /// Abort when the estimated size of the stored layers exceeds this many bytes.
    pub memory_budget: Option<u64>,
    /// Write the frontier here after every completed layer.
    pub persist_path: Option<PathBuf>,
    pub emit_torsion: bool,
}

impl SearchConfig {
    /// Search over the Long–Reid generators (`t = 9`).
    pub fn new(max_length: usize, mode: SearchMode) -> Self {
        Self::with_generators(
            max_length,
            mode,
            RepFamily::long_reid().generators().clone(),
        )
    }

    pub fn with_t(
        max_length: usize,
        mode: SearchMode,
        t: BigRational,
    ) -> Result<Self, FamilyError> {
        let family = RepFamily::new(t)?;
        Ok(Self::with_generators(
            max_length,
            mode,
            family.generators().clone(),
        ))
    }

    pub fn with_generators(max_length: usize, mode: SearchMode, generators: Generators) -> Self {
        Self {
            max_length,
            mode,
            generators,
            memory_budget: None,
            persist_path: None,
            emit_torsion: false,
        }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.max_length == 0 {
            return Err(SearchError::InvalidConfig(
                "max_length must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Depth of the enumerated ball in meet-in-the-middle mode.
    pub fn half_depth(&self) -> usize {
        self.max_length.div_ceil(2)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error(
        "memory budget of {budget} bytes exceeded (estimated {estimated} bytes); \
         last completed layer {last_completed_layer}"
    )]
    MemoryBudgetExceeded {
        last_completed_layer: usize,
        estimated: u64,
        budget: u64,
    },
    #[error(transparent)]
    Frontier(#[from] FrontierError),
    #[error("output error: {0}")]
    Output(#[from] io::Error),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchSummary {
    /// Number of new elements at each word length, starting with length 0.
    /// A resumed search records the layers before its frontier as 0.
    pub layer_sizes: Vec<usize>,
    pub witnesses: usize,
}

impl SearchSummary {
    pub fn elements(&self) -> usize {
        self.layer_sizes.iter().sum()
    }

    pub fn layers_completed(&self) -> usize {
        self.layer_sizes.len().saturating_sub(1)
    }
}

/// Nontrivial, integral with determinant ±1, and of infinite order unless
/// torsion is requested.
fn qualifies(matrix: &ProjectiveMatrix, emit_torsion: bool) -> bool {
    !matrix.is_identity()
        && matrix.det().magnitude().is_one()
        && (emit_torsion || !classify_order(matrix).is_finite())
}

fn check_budget(
    cfg: &SearchConfig,
    estimated: u64,
    last_completed_layer: usize,
) -> Result<(), SearchError> {
    match cfg.memory_budget {
        Some(budget) if estimated > budget => Err(SearchError::MemoryBudgetExceeded {
            last_completed_layer,
            estimated,
            budget,
        }),
        _ => Ok(()),
    }
}

/// Runs the configured mode, passing each witness to `sink` in a
/// deterministic order.
pub fn run_search(
    cfg: &SearchConfig,
    sink: &mut dyn FnMut(&WitnessRecord) -> io::Result<()>,
) -> Result<SearchSummary, SearchError> {
    match cfg.mode {
        SearchMode::Bfs => bfs_search(cfg, sink),
        SearchMode::Mitm => mitm_search(cfg, sink),
    }
}

/// Breadth-first enumeration up to `cfg.max_length`. Witnesses of each layer
/// are emitted, sorted by word, once the layer is complete.
pub fn bfs_search(
    cfg: &SearchConfig,
    sink: &mut dyn FnMut(&WitnessRecord) -> io::Result<()>,
) -> Result<SearchSummary, SearchError> {
    bfs_resume(cfg, Frontier::initial(cfg.generators.clone()), sink)
}

/// Continues a breadth-first search from a stored frontier. Only layers after
/// `frontier.layer` are emitted, so the output is exactly the continuation of
/// an uninterrupted run.
pub fn bfs_resume(
    cfg: &SearchConfig,
    mut frontier: Frontier,
    sink: &mut dyn FnMut(&WitnessRecord) -> io::Result<()>,
) -> Result<SearchSummary, SearchError> {
    cfg.validate()?;
    if frontier.generators != cfg.generators {
        return Err(FrontierError::GeneratorMismatch.into());
    }
    let mut summary = SearchSummary {
        layer_sizes: vec![0; frontier.layer],
        witnesses: 0,
    };
    summary.layer_sizes.push(frontier.current.len());
    while frontier.layer < cfg.max_length {
        let completed = frontier.layer;
        frontier = frontier.expand();
        check_budget(cfg, frontier.approx_bytes(), completed)?;
        for e in &frontier.current {
            if qualifies(&e.matrix, cfg.emit_torsion) {
                sink(&WitnessRecord::from_parts(e.word.clone(), e.matrix.clone()))?;
                summary.witnesses += 1;
            }
        }
        summary.layer_sizes.push(frontier.current.len());
        if let Some(path) = &cfg.persist_path {
            frontier.save(path)?;
        }
    }
    Ok(summary)
}

/// Meet-in-the-middle search. Emits the same element set as [`bfs_search`]
/// with the same configuration; each witness carries the shortlex-least word
/// `free_reduce(word(g)⁻¹ · word(h))` over the colliding pairs producing it.
pub fn mitm_search(
    cfg: &SearchConfig,
    sink: &mut dyn FnMut(&WitnessRecord) -> io::Result<()>,
) -> Result<SearchSummary, SearchError> {
    cfg.validate()?;
    // Every element of length ≤ L splits as g⁻¹h with |g| ≤ ⌈L/2⌉, |h| ≤ ⌊L/2⌋.
    let left_depth = cfg.half_depth();
    let right_depth = cfg.max_length / 2;

    let mut frontier = Frontier::initial(cfg.generators.clone());
    let mut ball: Vec<Element> = frontier.current.clone();
    let mut summary = SearchSummary {
        layer_sizes: vec![1],
        witnesses: 0,
    };
    let mut ball_bytes = frontier.approx_bytes();
    while frontier.layer < left_depth {
        let completed = frontier.layer;
        frontier = frontier.expand();
        ball_bytes += frontier
            .current
            .iter()
            .map(Element::approx_bytes)
            .sum::<u64>();
        check_budget(cfg, ball_bytes, completed)?;
        summary.layer_sizes.push(frontier.current.len());
        ball.extend(frontier.current.iter().cloned());
        if let Some(path) = &cfg.persist_path {
            frontier.save(path)?;
        }
    }

    let primes: Vec<PrimeContext> = cfg
        .generators
        .determinant_primes()
        .into_iter()
        .map(|p| PrimeContext::new(p).expect("factorization yields primes"))
        .collect();
    let mut buckets: HashMap<Vec<VertexKey>, Vec<usize>> = HashMap::new();
    for (i, e) in ball.iter().enumerate() {
        buckets
            .entry(vertex_tuple(&e.matrix, &primes))
            .or_default()
            .push(i);
    }

    let mut found: HashMap<ProjectiveMatrix, Word> = HashMap::new();
    for members in buckets.values() {
        for &gi in members {
            let g = &ball[gi];
            if g.word.len() > left_depth {
                continue;
            }
            let g_inv = g.matrix.inverse();
            for &hi in members {
                let h = &ball[hi];
                if gi == hi || h.word.len() > right_depth {
                    continue;
                }
                let m = g_inv.mul(&h.matrix);
                debug_assert!(m.det().magnitude().is_one());
                if !qualifies(&m, cfg.emit_torsion) {
                    continue;
                }
                let w = g.word.inverse().concat(&h.word).free_reduce();
                found
                    .entry(m)
                    .and_modify(|best| {
                        if w.shortlex_cmp(best).is_lt() {
                            *best = w.clone();
                        }
                    })
                    .or_insert(w);
            }
        }
    }

    let mut records: Vec<WitnessRecord> = found
        .into_iter()
        .map(|(matrix, word)| WitnessRecord::from_parts(word, matrix))
        .collect();
    records.sort_by(|x, y| {
        x.word
            .shortlex_cmp(&y.word)
            .then_with(|| x.matrix.cmp(&y.matrix))
    });
    for r in &records {
        sink(r)?;
    }
    summary.witnesses = records.len();
    Ok(summary)
}

/// Collects all witnesses of a search into memory.
pub fn collect_witnesses(
    cfg: &SearchConfig,
) -> Result<(Vec<WitnessRecord>, SearchSummary), SearchError> {
    let mut out = Vec::new();
    let summary = run_search(cfg, &mut |r| {
        out.push(r.clone());
        Ok(())
    })?;
    Ok((out, summary))
}
