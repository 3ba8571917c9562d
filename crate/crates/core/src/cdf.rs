//! Empirical distribution functions of simulation metrics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Real;

/// Step-function CDF over a finite sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalCdf<T> {
    sorted: Vec<T>,
}

impl<T: Real> EmpiricalCdf<T> {
    pub fn new(mut values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empirical CDF of an empty sample".into()));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidArgument("empirical CDF sample contains NaN".into()));
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
        Ok(Self { sorted: values })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn samples(&self) -> &[T] {
        &self.sorted
    }

    pub fn min(&self) -> T {
        self.sorted[0]
    }

    pub fn max(&self) -> T {
        self.sorted[self.sorted.len() - 1]
    }

    /// Fraction of samples `<= x`.
    pub fn eval(&self, x: T) -> f64 {
        self.sorted.partition_point(|&v| v <= x) as f64 / self.sorted.len() as f64
    }

    /// Smallest sample `x` with `eval(x) >= p`.
    pub fn quantile(&self, p: f64) -> T {
        let n = self.sorted.len();
        let rank = (p.clamp(0.0, 1.0) * n as f64).ceil() as usize;
        self.sorted[rank.clamp(1, n) - 1]
    }

    pub fn median(&self) -> T {
        self.quantile(0.5)
    }

    pub fn mean(&self) -> f64 {
        self.sorted.iter().map(|v| v.as_f64()).sum::<f64>() / self.sorted.len() as f64
    }

    /// `(value, F(value))` at each distinct sample value, ascending.
    pub fn steps(&self) -> Vec<(T, f64)> {
        let n = self.sorted.len() as f64;
        let mut out: Vec<(T, f64)> = Vec::new();
        for (i, &v) in self.sorted.iter().enumerate() {
            let f = (i + 1) as f64 / n;
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 = f,
                _ => out.push((v, f)),
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn counting_examples() {
        let c = EmpiricalCdf::new(vec![3.0, 1.0, 2.0, 1.0]).unwrap();
        assert_eq!(c.eval(1.0), 0.5);
        assert_eq!(c.eval(2.0), 0.75);
        assert_eq!(c.eval(0.99), 0.0);
        assert_eq!(c.eval(3.0), 1.0);
        assert_eq!(c.eval(100.0), 1.0);
        assert_eq!(c.steps(), vec![(1.0, 0.5), (2.0, 0.75), (3.0, 1.0)]);
    }

    #[test]
    fn empty_rejected() {
        assert!(EmpiricalCdf::<f64>::new(vec![]).is_err());
        assert!(EmpiricalCdf::new(vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn quantiles() {
        let c = EmpiricalCdf::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(c.median(), 2.0);
        assert_eq!(c.quantile(0.0), 1.0);
        assert_eq!(c.quantile(0.51), 3.0);
        assert_eq!(c.quantile(1.0), 4.0);
        assert_eq!(c.mean(), 2.5);
        let single = EmpiricalCdf::new(vec![7.0_f32]).unwrap();
        assert_eq!(single.quantile(0.95), 7.0);
        assert_eq!(single.steps(), vec![(7.0, 1.0)]);
    }

    proptest! {
        #[test]
        fn monotone_and_bounded(v in prop::collection::vec(-100.0..100.0_f64, 1..60),
            xs in prop::collection::vec(-120.0..120.0_f64, 1..30)) {
            let c = EmpiricalCdf::new(v.clone()).unwrap();
            let mut xs = xs;
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let mut prev = 0.0;
            for x in xs {
                let f = c.eval(x);
                prop_assert!((0.0..=1.0).contains(&f));
                prop_assert!(f >= prev);
                prev = f;
            }
            prop_assert_eq!(c.eval(c.min() - 1e-9), 0.0);
            prop_assert_eq!(c.eval(c.max()), 1.0);
            for p in [0.1, 0.5, 0.9] {
                prop_assert!(c.eval(c.quantile(p)) >= p);
            }
        }
    }
}
