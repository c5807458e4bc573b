use crate::error::{Error, Result};

/// Closed-form branch of a source term `f(s)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Branch {
    /// `64(n−1)/(8−s)`, `s ≤ 0`
    InteriorLow,
    /// `4[(n+2)√(s+4) − 6]`, `s ≥ 0`
    InteriorHigh,
    /// `3(n−3)/16·w³ − (n−4)/16·w⁴` with `w = 3 − √(9−8s)`, `0 < s ≤ 1`
    ExteriorLow,
    /// `(n−1)/(2(3−2s))`, `1 ≤ s < 3/2`
    ExteriorHigh,
    /// `1`
    Unit,
}

impl Branch {
    /// `f(hi + lo)`; `lo` only matters where the branch is ill-conditioned.
    fn eval(&self, n: usize, hi: f64, lo: f64) -> f64 {
        let nf = n as f64;
        match *self {
            Branch::InteriorLow => 64.0 * (nf - 1.0) / (8.0 - hi),
            Branch::InteriorHigh => 4.0 * ((nf + 2.0) * (hi + 4.0).sqrt() - 6.0),
            Branch::ExteriorLow => {
                // 3 − √(9−8s) without cancellation near s = 0
                let w = 8.0 * hi / (3.0 + (9.0 - 8.0 * hi).sqrt());
                let w3 = w * w * w;
                3.0 * (nf - 3.0) / 16.0 * w3 - (nf - 4.0) / 16.0 * w3 * w
            }
            // 3 − 2·hi is exact for hi ∈ [1, 3/2]
            Branch::ExteriorHigh => (nf - 1.0) / (2.0 * ((3.0 - 2.0 * hi) - 2.0 * lo)),
            Branch::Unit => 1.0,
        }
    }
}

/// Piecewise source term in dimension `n`: `branches[0]` up to and
/// including `split`, `branches[1]` above it.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceFunction {
    n: usize,
    branches: Vec<Branch>,
    split: Option<f64>,
    /// Open domain `(lo, hi)`; infinite ends mean unbounded.
    domain: (f64, f64),
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension must be at least 2, got {n}")));
    }
    Ok(())
}

/// Source of the interior construction; defined on all of ℝ.
pub fn interior_source(n: usize) -> Result<SourceFunction> {
    check_dim(n)?;
    Ok(SourceFunction {
        n,
        branches: vec![Branch::InteriorLow, Branch::InteriorHigh],
        split: Some(0.0),
        domain: (f64::NEG_INFINITY, f64::INFINITY),
    })
}

/// Source of the exterior construction; defined on `(0, 3/2)`.
pub fn exterior_source(n: usize) -> Result<SourceFunction> {
    check_dim(n)?;
    Ok(SourceFunction {
        n,
        branches: vec![Branch::ExteriorLow, Branch::ExteriorHigh],
        split: Some(1.0),
        domain: (0.0, 1.5),
    })
}

/// `f ≡ 1`, the torsion problem.
pub fn unit_source(n: usize) -> Result<SourceFunction> {
    check_dim(n)?;
    Ok(SourceFunction {
        n,
        branches: vec![Branch::Unit],
        split: None,
        domain: (f64::NEG_INFINITY, f64::INFINITY),
    })
}

impl SourceFunction {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn split(&self) -> Option<f64> {
        self.split
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn contains(&self, s: f64) -> bool {
        let (lo, hi) = self.domain;
        s.is_finite() && (lo == f64::NEG_INFINITY || s > lo) && (hi == f64::INFINITY || s < hi)
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        self.eval_split(s, 0.0)
    }

    /// `f(hi + lo)` for an argument known to better than one rounding.
    pub fn eval_split(&self, hi: f64, lo: f64) -> Result<f64> {
        if !self.contains(hi) {
            return Err(Error::SourceDomain(hi));
        }
        let k = match self.split {
            Some(c) if hi > c => 1,
            _ => 0,
        };
        Ok(self.branches[k].eval(self.n, hi, lo))
    }

    /// `|left − right|` at the split point, 0 for a single branch.
    pub fn branch_gap(&self) -> f64 {
        match self.split {
            Some(c) => (self.branches[0].eval(self.n, c, 0.0) - self.branches[1].eval(self.n, c, 0.0)).abs(),
            None => 0.0,
        }
    }
}

/// Finite-difference slope statistics of `f` on uniform samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SourceProperties {
    pub min_slope: f64,
    /// Largest `|slope|` between consecutive samples.
    pub lipschitz_bound: f64,
    pub positive: bool,
}

/// Samples `f` at `samples ≥ 2` equispaced points of `[a, b]`.
pub fn source_properties(f: &SourceFunction, interval: (f64, f64), samples: usize) -> Result<SourceProperties> {
    let (a, b) = interval;
    if samples < 2 || !(b > a) {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 samples on a nonempty interval, got {samples} on [{a}, {b}]"
        )));
    }
    let ds = (b - a) / (samples - 1) as f64;
    let s: Vec<f64> = (0..samples).map(|k| if k + 1 == samples { b } else { a + k as f64 * ds }).collect();
    let vals = s.iter().map(|&x| f.eval(x)).collect::<Result<Vec<_>>>()?;
    let mut min_slope = f64::INFINITY;
    let mut lip = 0.0f64;
    for k in 1..samples {
        let slope = (vals[k] - vals[k - 1]) / (s[k] - s[k - 1]);
        min_slope = min_slope.min(slope);
        lip = lip.max(slope.abs());
    }
    Ok(SourceProperties {
        min_slope,
        lipschitz_bound: lip,
        positive: vals.iter().all(|&v| v > 0.0),
    })
}
