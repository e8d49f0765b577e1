//! Seeded program corruption used to build repair benchmarks.

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use psdl::geometry::Facing;
use psdl::lang::{apply_edit, edit_sites, Literal, Program};
use psdl::repair::Edit;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InjectError {
    #[error("at least one corruption must be requested")]
    ZeroErrors,
    #[error("requested {requested} corruptions but the program has {available} changeable sites")]
    TooFewSites { requested: usize, available: usize },
}

/// Corrupts `k` distinct literal sites of `p`.
///
/// Constants are scaled by a factor uniform on [1.5, 4] whose sign flips
/// with probability 0.25. Directions are redrawn uniformly from the three
/// other cardinals. Zero-valued constants are not eligible since scaling
/// cannot change them.
pub fn inject_errors(
    p: &Program,
    rng: &mut ChaCha8Rng,
    k: usize,
) -> Result<(Program, Vec<Edit>), InjectError> {
    if k == 0 {
        return Err(InjectError::ZeroErrors);
    }
    let sites: Vec<_> = edit_sites(p)
        .into_iter()
        .filter(|s| s.value != Literal::Number(0.0) && s.value != Literal::Number(-0.0))
        .collect();
    if k > sites.len() {
        return Err(InjectError::TooFewSites {
            requested: k,
            available: sites.len(),
        });
    }
    let mut chosen = sample(rng, sites.len(), k).into_vec();
    chosen.sort_unstable();
    let mut out = p.clone();
    let mut edits = Vec::with_capacity(k);
    for i in chosen {
        let site = &sites[i];
        let after = match site.value {
            Literal::Number(c) => {
                let mut factor: f64 = rng.gen_range(1.5..=4.0);
                if rng.gen_bool(0.25) {
                    factor = -factor;
                }
                Literal::Number(c * factor)
            }
            Literal::Direction(d) => {
                let others: Vec<Facing> = Facing::ALL.into_iter().filter(|&f| f != d).collect();
                Literal::Direction(others[rng.gen_range(0..others.len())])
            }
        };
        out = apply_edit(&out, &site.path, after).expect("site taken from this program");
        edits.push(Edit {
            path: site.path.clone(),
            before: site.value,
            after,
        });
    }
    Ok((out, edits))
}
