use rand::seq::SliceRandom;
use rand::Rng;

use super::{Multigraph, SimpleGraph};
use crate::degseq::DegreeSequence;
use crate::error::{Error, Result};

/// Configuration-model attempts before [`sample_simple_graph`] gives up.
pub const DEFAULT_RETRY_LIMIT: u64 = 1_000_000;

/// Uniform perfect matching of the `Σ d_j` points, cell `j` holding `d_j` of them,
/// projected onto the vertices.
pub fn configuration_sample<R: Rng + ?Sized>(d: &DegreeSequence, rng: &mut R) -> Multigraph {
    let mut points: Vec<u32> =
        d.degrees().iter().enumerate().flat_map(|(j, &dj)| std::iter::repeat_n(j as u32, dj as usize)).collect();
    points.shuffle(rng);
    let edges = points.chunks_exact(2).map(|p| (p[0], p[1]));
    Multigraph::new(d.n(), edges).expect("points are labelled by vertices")
}

/// Uniform element of `Γ_d` by rejecting non-simple configurations.
pub fn sample_simple_graph<R: Rng + ?Sized>(d: &DegreeSequence, rng: &mut R) -> Result<SimpleGraph> {
    sample_simple_graph_with_limit(d, rng, DEFAULT_RETRY_LIMIT)
}

pub fn sample_simple_graph_with_limit<R: Rng + ?Sized>(
    d: &DegreeSequence,
    rng: &mut R,
    limit: u64,
) -> Result<SimpleGraph> {
    if !d.is_graphical() {
        return Err(Error::Precondition(format!("({d}) is not graphical")));
    }
    for _ in 0..limit {
        if let Some(g) = configuration_sample(d, rng).to_simple() {
            return Ok(g);
        }
    }
    Err(Error::RetryLimit(limit))
}
