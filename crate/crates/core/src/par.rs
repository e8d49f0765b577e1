//! Order-preserving map that runs on the rayon pool when enabled.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Schedule {
    Sequential,
    #[default]
    Parallel,
}

/// Applies `f` to every item and returns results in input order.
///
/// `Schedule::Parallel` falls back to a plain loop when the crate is built
/// without the `parallel` feature.
pub fn map<T, R, F>(schedule: Schedule, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match schedule {
        #[cfg(feature = "parallel")]
        Schedule::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = map(Schedule::Sequential, &xs, |x| x * x);
        let par = map(Schedule::Parallel, &xs, |x| x * x);
        assert_eq!(seq, par);
    }
}
