use rand::Rng;

use super::{coherence, PilotPattern};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best: PilotPattern,
    pub best_coherence: f64,
    /// `trace[i]` is the best coherence seen after `i + 1` draws.
    pub trace: Vec<f64>,
}

/// Multiple random search: draw `iterations` independent uniform patterns
/// and keep the one with the lowest coherence. Ties keep the earliest draw.
pub fn random_search<R: Rng + ?Sized>(
    n_total: usize,
    n_pilots: usize,
    n_cols: usize,
    iterations: usize,
    rng: &mut R,
) -> Result<SearchOutcome> {
    if iterations == 0 {
        return Err(Error::InvalidConfig("random search needs at least one iteration".into()));
    }
    let mut trace = Vec::with_capacity(iterations);
    let mut best: Option<(PilotPattern, f64)> = None;
    for _ in 0..iterations {
        let candidate = PilotPattern::random(n_total, n_pilots, rng)?;
        let mu = coherence(&candidate, n_cols)?;
        match &best {
            Some((_, b)) if mu >= *b => {}
            _ => best = Some((candidate, mu)),
        }
        trace.push(best.as_ref().map(|(_, b)| *b).unwrap());
    }
    let (best, best_coherence) = best.unwrap();
    Ok(SearchOutcome {
        best,
        best_coherence,
        trace,
    })
}
