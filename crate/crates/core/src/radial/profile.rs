use crate::error::{Error, Result};

/// One closed-form radial piece `u(r)` with its first two derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Piece {
    /// `(3 − r²)² − 4`
    InteriorCore,
    /// `8(1 − r)`
    InteriorEikonal,
    /// `(3 − r)/2`
    ExteriorEikonal,
    /// `3/(2r) − 1/(2r²)`
    ExteriorFar,
    /// `(R² − r²)/(2n)`
    Ball { radius: f64, n: usize },
}

impl Piece {
    pub fn u(&self, r: f64) -> f64 {
        let (hi, lo) = self.u_split(r);
        hi + lo
    }

    /// `u(r)` as an unevaluated sum `hi + lo` carrying the rounding error
    /// of the leading subtraction where it matters.
    pub fn u_split(&self, r: f64) -> (f64, f64) {
        match *self {
            Piece::InteriorCore => {
                let a = 3.0 - r * r;
                (a * a - 4.0, 0.0)
            }
            Piece::InteriorEikonal => (8.0 * (1.0 - r), 0.0),
            Piece::ExteriorEikonal => {
                let (hi, lo) = two_sum(3.0, -r);
                (0.5 * hi, 0.5 * lo)
            }
            Piece::ExteriorFar => (1.5 / r - 0.5 / (r * r), 0.0),
            Piece::Ball { radius, n } => ((radius * radius - r * r) / (2.0 * n as f64), 0.0),
        }
    }

    pub fn du(&self, r: f64) -> f64 {
        match *self {
            Piece::InteriorCore => -4.0 * r * (3.0 - r * r),
            Piece::InteriorEikonal => -8.0,
            Piece::ExteriorEikonal => -0.5,
            Piece::ExteriorFar => -1.5 / (r * r) + 1.0 / (r * r * r),
            Piece::Ball { n, .. } => -r / n as f64,
        }
    }

    pub fn d2u(&self, r: f64) -> f64 {
        match *self {
            Piece::InteriorCore => -12.0 + 12.0 * r * r,
            Piece::InteriorEikonal | Piece::ExteriorEikonal => 0.0,
            Piece::ExteriorFar => 3.0 / (r * r * r) - 3.0 / (r * r * r * r),
            Piece::Ball { n, .. } => -1.0 / n as f64,
        }
    }
}

/// Error-free transformation: `a + b = s + e` exactly.
pub(crate) fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileKind {
    Interior,
    Exterior,
    Ball,
}

/// Radial function of `r = |x|` in dimension `n`, glued from closed-form
/// pieces at increasing breakpoints. A breakpoint belongs to the piece on
/// its left.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseRadialProfile {
    kind: ProfileKind,
    n: usize,
    breakpoints: Vec<f64>,
    pieces: Vec<Piece>,
    /// Whether `r = 0` is in the domain.
    includes_origin: bool,
}

fn check_dim(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension must be at least 2, got {n}")));
    }
    Ok(())
}

/// `(3 − r²)² − 4` for `r ≤ 1`, `8(1 − r)` for `r ≥ 1`; `|u'| = 8` outside the unit ball.
pub fn interior_profile(n: usize) -> Result<PiecewiseRadialProfile> {
    check_dim(n)?;
    Ok(PiecewiseRadialProfile {
        kind: ProfileKind::Interior,
        n,
        breakpoints: vec![1.0],
        pieces: vec![Piece::InteriorCore, Piece::InteriorEikonal],
        includes_origin: true,
    })
}

/// `(3 − r)/2` for `0 < r ≤ 1`, `3/(2r) − 1/(2r²)` for `r ≥ 1`.
pub fn exterior_profile(n: usize) -> Result<PiecewiseRadialProfile> {
    check_dim(n)?;
    Ok(PiecewiseRadialProfile {
        kind: ProfileKind::Exterior,
        n,
        breakpoints: vec![1.0],
        pieces: vec![Piece::ExteriorEikonal, Piece::ExteriorFar],
        includes_origin: false,
    })
}

/// Torsion function of the ball of radius `R`: `u = (R² − r²)/(2n)`,
/// `−Δu = 1`, `|u_ν| = R/n` on `r = R`. Returns the profile and `R/n`.
pub fn ball_baseline(n: usize, radius: f64) -> Result<(PiecewiseRadialProfile, f64)> {
    check_dim(n)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    let prof = PiecewiseRadialProfile {
        kind: ProfileKind::Ball,
        n,
        breakpoints: vec![],
        pieces: vec![Piece::Ball { radius, n }],
        includes_origin: true,
    };
    Ok((prof, radius / n as f64))
}

impl PiecewiseRadialProfile {
    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn includes_origin(&self) -> bool {
        self.includes_origin
    }

    pub fn check_radius(&self, r: f64) -> Result<()> {
        let ok = r.is_finite() && if self.includes_origin { r >= 0.0 } else { r > 0.0 };
        if ok {
            Ok(())
        } else {
            Err(Error::OutsideDomain(r))
        }
    }

    /// Piece in charge of radius `r`.
    pub fn piece(&self, r: f64) -> &Piece {
        let k = self.breakpoints.iter().take_while(|&&b| r > b).count();
        &self.pieces[k]
    }

    pub fn u(&self, r: f64) -> f64 {
        self.piece(r).u(r)
    }

    pub fn du(&self, r: f64) -> f64 {
        self.piece(r).du(r)
    }

    pub fn d2u(&self, r: f64) -> f64 {
        self.piece(r).d2u(r)
    }

    /// `(|Δu|, |Δu'|, |Δu''|)` between the two pieces meeting at each breakpoint.
    pub fn breakpoint_gaps(&self) -> Vec<[f64; 3]> {
        self.breakpoints
            .iter()
            .enumerate()
            .map(|(k, &b)| {
                let (l, r) = (&self.pieces[k], &self.pieces[k + 1]);
                [
                    (l.u(b) - r.u(b)).abs(),
                    (l.du(b) - r.du(b)).abs(),
                    (l.d2u(b) - r.d2u(b)).abs(),
                ]
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_values() {
        let p = interior_profile(2).unwrap();
        assert_eq!(p.u(0.0), 5.0);
        assert_eq!(p.pieces[0].u(1.0), 0.0);
        assert_eq!(p.pieces[1].u(1.0), 0.0);
        assert_eq!(p.pieces[0].du(1.0), -8.0);
        assert_eq!(p.pieces[1].du(1.0), -8.0);
        assert_eq!(p.pieces[0].d2u(1.0), 0.0);
        assert_eq!(p.pieces[1].d2u(1.0), 0.0);
        assert_eq!(p.du(0.5), -5.5);
    }

    #[test]
    fn exterior_values() {
        let p = exterior_profile(3).unwrap();
        assert_eq!(p.pieces[0].u(1.0), 1.0);
        assert_eq!(p.pieces[1].u(1.0), 1.0);
        assert_eq!(p.pieces[0].du(1.0), -0.5);
        assert_eq!(p.pieces[1].du(1.0), -0.5);
        assert_eq!(p.u(2.0), 0.625);
        assert!(p.check_radius(0.0).is_err());
        assert!(p.check_radius(1e-300).is_ok());
    }

    #[test]
    fn split_value_is_exact() {
        let p = Piece::ExteriorEikonal;
        for r in [1e-3, 0.1, 0.3, 0.7] {
            let (hi, lo) = p.u_split(r);
            // 3 − 2(hi + lo) recovers r exactly
            assert_eq!((3.0 - 2.0 * hi) - 2.0 * lo, r);
        }
    }

    #[test]
    fn gluing_is_c2() {
        for n in 2..=8 {
            for p in [interior_profile(n).unwrap(), exterior_profile(n).unwrap()] {
                for g in p.breakpoint_gaps() {
                    assert!(g.iter().sum::<f64>() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn ball_values() {
        let (p, g) = ball_baseline(2, 1.0).unwrap();
        assert_eq!(p.u(0.0), 0.25);
        assert_eq!(g, 0.5);
        let r = (2.5 / std::f64::consts::PI).sqrt();
        assert!((ball_baseline(2, r).unwrap().1 - 0.4460).abs() < 1e-4);
        assert!(ball_baseline(1, 1.0).is_err());
        assert!(ball_baseline(3, 0.0).is_err());
    }

    #[test]
    fn dimension_is_checked() {
        assert!(interior_profile(1).is_err());
        assert!(exterior_profile(0).is_err());
    }
}
