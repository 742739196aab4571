use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{domain, Result};
use crate::linalg::{parse_rational, Rational, Scalar};

/// Float weights may miss 1 by at most this much.
pub const FLOAT_SUM_SLACK: f64 = 1e-12;

/// Point of the probability simplex: nonnegative weights summing to one.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexPoint<T> {
    weights: Vec<T>,
}

impl<T: Scalar> SimplexPoint<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(domain("simplex point needs at least one weight"));
        }
        if weights.iter().any(|w| w.is_negative() || !w.to_f64().is_finite()) {
            return Err(domain("simplex weights must be nonnegative and finite"));
        }
        let sum = weights.iter().fold(T::zero(), |a, w| a + w.clone());
        let ok = if T::EXACT { sum.is_one() } else { (sum.to_f64() - 1.0).abs() <= FLOAT_SUM_SLACK };
        if !ok {
            return Err(domain(format!("simplex weights sum to {}, not 1", sum.to_f64())));
        }
        Ok(Self { weights })
    }

    pub fn uniform(k: usize) -> Self {
        assert!(k > 0, "simplex dimension must be positive");
        Self { weights: vec![T::one() / T::from_usize(k); k] }
    }

    /// Simplex vertex `e_i`.
    pub fn vertex(k: usize, i: usize) -> Self {
        assert!(i < k, "vertex {i} out of range for k = {k}");
        Self { weights: (0..k).map(|l| if l == i { T::one() } else { T::zero() }).collect() }
    }

    /// Uniform weights on `support` (0-based), zero elsewhere.
    pub fn uniform_on(k: usize, support: &[usize]) -> Result<Self> {
        if support.is_empty() {
            return Err(domain("support must be nonempty"));
        }
        let w = T::one() / T::from_usize(support.len());
        let mut weights = vec![T::zero(); k];
        for &i in support {
            if i >= k {
                return Err(domain(format!("support index {} out of range", i + 1)));
            }
            weights[i] = w.clone();
        }
        Self::new(weights)
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn to_f64(&self) -> SimplexPoint<f64> {
        SimplexPoint { weights: self.weights.iter().map(Scalar::to_f64).collect() }
    }

    /// Indices with nonzero weight.
    pub fn support(&self) -> Vec<usize> {
        self.weights.iter().enumerate().filter(|(_, w)| !w.is_zero()).map(|(i, _)| i).collect()
    }
}

impl SimplexPoint<f64> {
    /// Nearest exact simplex point with denominator `2^bits`: entries are
    /// rounded down, then the deficit goes to the largest entry. The
    /// result is a new exact point, not a claim about the float input.
    pub fn rationalize(&self, bits: u32) -> SimplexPoint<Rational> {
        let denom = BigInt::one() << bits;
        let scale = (1u64 << bits) as f64;
        let mut numers: Vec<BigInt> =
            self.weights.iter().map(|&w| BigInt::from((w.max(0.0) * scale).floor() as u64)).collect();
        let total: BigInt = numers.iter().sum();
        let largest = (0..numers.len()).fold(0, |best, i| if self.weights[i] > self.weights[best] { i } else { best });
        if total <= denom {
            numers[largest] += &denom - total;
        } else {
            // only reachable when the float weights overshoot 1
            let mut excess = total - &denom;
            for x in numers.iter_mut() {
                let take = excess.clone().min(x.clone());
                *x -= &take;
                excess -= take;
            }
        }
        SimplexPoint { weights: numers.into_iter().map(|p| Rational::new(p, denom.clone())).collect() }
    }

    /// Euclidean projection of `y` onto the simplex (sort-based).
    pub fn project(y: &[f64]) -> Self {
        let mut u: Vec<f64> = y.to_vec();
        u.sort_by(|a, b| b.total_cmp(a));
        let mut cumsum = 0.0;
        let mut theta = 0.0;
        for (i, &ui) in u.iter().enumerate() {
            cumsum += ui;
            let t = (cumsum - 1.0) / (i + 1) as f64;
            if ui - t > 0.0 {
                theta = t;
            }
        }
        let mut weights: Vec<f64> = y.iter().map(|&v| (v - theta).max(0.0)).collect();
        let sum: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= sum);
        Self { weights }
    }

    /// Builds a point without re-validating; the caller guarantees the
    /// weights came from [`project`](Self::project)-style normalization.
    pub(crate) fn from_normalized(weights: Vec<f64>) -> Self {
        Self { weights }
    }
}

impl Serialize for SimplexPoint<f64> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.weights.serialize(s)
    }
}

impl Serialize for SimplexPoint<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.weights.iter().map(ToString::to_string))
    }
}

impl SimplexPoint<Rational> {
    pub fn to_json(&self) -> Value {
        json!(self.weights.iter().map(ToString::to_string).collect::<Vec<_>>())
    }

    pub fn from_strings(items: &[&str]) -> Result<Self> {
        let weights = items
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| domain(format!("bad weight {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(weights)
    }
}
