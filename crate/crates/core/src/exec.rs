//! Execution policy for embarrassingly parallel fan-outs.
//!
//! With the `parallel` feature (default) `Execution::Parallel` dispatches to
//! rayon; without it every policy runs sequentially. Results are always
//! returned in input order.

use crate::error::Result;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Like [`map`] but short-circuits on the first error in input order.
pub fn try_map<T, R, F>(exec: Execution, items: &[T], f: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    map(exec, items, f).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = map(Execution::Sequential, &xs, |x| x * x);
        let par = map(Execution::Parallel, &xs, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(par[999], 998_001);
    }

    #[test]
    fn first_error_wins() {
        let xs: Vec<i32> = (0..10).collect();
        let r = try_map(Execution::Parallel, &xs, |&x| {
            if x >= 3 {
                Err(crate::error::invalid(format!("{x}")))
            } else {
                Ok(x)
            }
        });
        assert_eq!(r, Err(crate::error::Error::InvalidParameter("3".into())));
    }
}
