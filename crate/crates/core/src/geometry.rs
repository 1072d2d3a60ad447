//! PSK decision-region geometry.
//!
//! The decision region of the `i`-th `m`-PSK point is the open cone spanned
//! by two unit vectors at angles `2 pi i / m -+ pi / m`. Writing the lifted
//! noiseless observation of user `k` in the basis of its intended region
//! gives two coefficients; the observation decodes correctly iff both are
//! positive. Stacking these maps for all users gives the feasibility
//! matrix `S^-1 H~` that the precoders work against.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{DimensionError, Error, Result};
use crate::lift::{lift_channel, unit_phasor, ComplexMatrix, RealMatrix};
use crate::precoders::TernaryVector;

/// Squared-distance slack under which two constellation points count as
/// equally near. Far below the 1e-9 margins the rest of the crate cares about.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct Constellation {
    order: usize,
    points: Vec<Complex64>,
}

impl Constellation {
    /// Unit-circle `m`-PSK with point `i` at angle `2 pi i / m`.
    pub fn psk(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidOrder(order));
        }
        let points = (0..order).map(|i| unit_phasor(i as i64, order as i64)).collect();
        Ok(Self { order, points })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Complex64 {
        self.points[i]
    }

    /// True iff `c_i` is a (possibly tied) nearest point to `y`.
    pub fn in_region(&self, y: Complex64, i: usize) -> bool {
        let di = (y - self.points[i]).norm_sqr();
        self.points.iter().all(|&c| di <= (y - c).norm_sqr() + BOUNDARY_TOLERANCE)
    }

    /// Nearest point index; ties go to the smallest index.
    pub fn decode(&self, y: Complex64) -> usize {
        let dist: Vec<f64> = self.points.iter().map(|&c| (y - c).norm_sqr()).collect();
        let best = dist.iter().copied().fold(f64::INFINITY, f64::min);
        dist.iter()
            .position(|&d| d <= best + BOUNDARY_TOLERANCE)
            .expect("constellation is nonempty")
    }
}

/// Basis of the decision region of one constellation point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecisionBasis {
    pub index: usize,
    pub s1: [f64; 2],
    pub s2: [f64; 2],
    /// Columns `s1`, `s2`.
    pub s: [[f64; 2]; 2],
    pub s_inv: [[f64; 2]; 2],
}

impl DecisionBasis {
    /// Requires `m >= 3`; at `m = 2` the two edges are antiparallel.
    pub fn new(order: usize, index: usize) -> Result<Self> {
        if order < 3 {
            return Err(Error::InvalidOrder(order));
        }
        if index >= order {
            return Err(Error::InvalidMessage { index, order });
        }
        let (i, den) = (index as i64, 2 * order as i64);
        let lo = unit_phasor(2 * i - 1, den);
        let hi = unit_phasor(2 * i + 1, den);
        let scale = 1.0 / unit_phasor(1, order as i64).im;
        Ok(Self {
            index,
            s1: [lo.re, lo.im],
            s2: [hi.re, hi.im],
            s: [[lo.re, hi.re], [lo.im, hi.im]],
            s_inv: [[scale * hi.im, -scale * hi.re], [-scale * lo.im, scale * lo.re]],
        })
    }

    /// Coefficients of `v` in the `(s1, s2)` basis.
    pub fn coefficients(&self, v: [f64; 2]) -> [f64; 2] {
        let m = &self.s_inv;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }
}

/// Intended message index of each user.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MessageVector(Vec<usize>);

impl MessageVector {
    pub fn new(messages: Vec<usize>, order: usize) -> Result<Self> {
        if let Some(&index) = messages.iter().find(|&&mu| mu >= order) {
            return Err(Error::InvalidMessage { index, order });
        }
        Ok(Self(messages))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// The intended PSK symbols `c_{mu_k}`.
    pub fn symbols(&self, constellation: &Constellation) -> Vec<Complex64> {
        self.0.iter().map(|&mu| constellation.point(mu)).collect()
    }
}

/// `Lambda = blockdiag(S_mu1^-1, ..., S_muK^-1) H~`, with provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct FeasibilityMatrix {
    pub lambda: RealMatrix,
    pub users: usize,
    pub antennas: usize,
    pub order: usize,
    pub messages: MessageVector,
}

impl FeasibilityMatrix {
    pub fn build(h: &ComplexMatrix, messages: &MessageVector, order: usize) -> Result<Self> {
        if h.rows() != messages.len() {
            return Err(DimensionError::new("channel rows vs messages", h.rows(), messages.len()).into());
        }
        let lifted = lift_channel(h).matrix;
        let mut lambda = RealMatrix::zeros(lifted.rows(), lifted.cols());
        for (k, &mu) in messages.as_slice().iter().enumerate() {
            let basis = DecisionBasis::new(order, mu)?;
            for j in 0..lifted.cols() {
                let [a1, a2] = basis.coefficients([lifted[(2 * k, j)], lifted[(2 * k + 1, j)]]);
                lambda[(2 * k, j)] = a1;
                lambda[(2 * k + 1, j)] = a2;
            }
        }
        Ok(Self { lambda, users: h.rows(), antennas: h.cols(), order, messages: messages.clone() })
    }

    /// `alpha = Lambda x`, laid out `[a_11, a_12, ..., a_K1, a_K2]`.
    pub fn coefficients(&self, x: &TernaryVector) -> Result<Vec<f64>, DimensionError> {
        self.lambda.mul_vec(&x.to_f64())
    }

    /// Smallest entry of `Lambda x`; the max-min objective.
    pub fn min_coefficient(&self, x: &TernaryVector) -> Result<f64, DimensionError> {
        Ok(self.coefficients(x)?.into_iter().fold(f64::INFINITY, f64::min))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn constellation_points() {
        let qpsk = Constellation::psk(4).unwrap();
        assert_eq!(qpsk.point(1), Complex64::new(-0.0, 1.0));
        let psk8 = Constellation::psk(8).unwrap();
        assert!(close(psk8.point(1).re, 0.7071, 1e-4) && close(psk8.point(1).im, 0.7071, 1e-4));
        assert_eq!(psk8.point(4).re, -1.0);
        assert_eq!(psk8.point(4).im.abs(), 0.0);
        for p in psk8.points() {
            assert!(close(p.norm(), 1.0, 1e-12));
        }
        assert!(matches!(Constellation::psk(1), Err(Error::InvalidOrder(1))));
        assert!(Constellation::psk(2).is_ok());
    }

    #[test]
    fn basis_examples() {
        let b = DecisionBasis::new(8, 0).unwrap();
        assert!(close(b.s1[0], 0.9239, 1e-4) && close(b.s1[1], -0.3827, 1e-4));
        assert!(close(b.s2[0], 0.9239, 1e-4) && close(b.s2[1], 0.3827, 1e-4));

        let b = DecisionBasis::new(4, 0).unwrap();
        let want = [[0.7071, -0.7071], [0.7071, 0.7071]];
        for r in 0..2 {
            for c in 0..2 {
                assert!(close(b.s_inv[r][c], want[r][c], 1e-4));
            }
        }
        assert!(matches!(DecisionBasis::new(2, 0), Err(Error::InvalidOrder(2))));
        assert!(DecisionBasis::new(4, 4).is_err());
    }

    #[test]
    fn basis_inverse_and_rotation_form() {
        for m in [3, 4, 5, 8, 16, 32] {
            for i in 0..m {
                let b = DecisionBasis::new(m, i).unwrap();
                for r in 0..2 {
                    for c in 0..2 {
                        let prod: f64 = (0..2).map(|t| b.s[r][t] * b.s_inv[t][c]).sum();
                        let id = if r == c { 1.0 } else { 0.0 };
                        assert!(close(prod, id, 1e-12), "m={m} i={i}");
                    }
                }
                // s_l = R(-+pi/m) g(c_i)
                let ci = Constellation::psk(m).unwrap().point(i);
                let theta = std::f64::consts::PI / m as f64;
                for (s, sign) in [(b.s1, -1.0), (b.s2, 1.0)] {
                    let r = crate::lift::rotation(sign * theta);
                    let v = [r[0][0] * ci.re + r[0][1] * ci.im, r[1][0] * ci.re + r[1][1] * ci.im];
                    assert!(close(v[0], s[0], 1e-12) && close(v[1], s[1], 1e-12));
                }
            }
        }
    }

    #[test]
    fn region_membership_examples() {
        let q = Constellation::psk(4).unwrap();
        let y = Complex64::new(1.0, 0.1);
        assert!(q.in_region(y, 0));
        assert!(!q.in_region(y, 1));
        for m in [4, 8, 16] {
            let c = Constellation::psk(m).unwrap();
            for i in 0..m {
                assert!(c.in_region(Complex64::new(0.0, 0.0), i));
            }
        }
    }

    #[test]
    fn decode_examples() {
        let c8 = Constellation::psk(8).unwrap();
        assert_eq!(c8.decode(Complex64::new(0.9, 0.05)), 0);
        assert_eq!(c8.decode(c8.point(3)), 3);
        let q = Constellation::psk(4).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert_eq!(q.decode(Complex64::new(h, h)), 0);
        for m in [3, 4, 8, 16] {
            let c = Constellation::psk(m).unwrap();
            for i in 0..m {
                assert_eq!(c.decode(c.point(i)), i);
            }
        }
    }

    #[test]
    fn feasibility_matrix_examples() {
        let one = ComplexMatrix::from_rows(&[vec![Complex64::new(1.0, 0.0)]]).unwrap();
        let mu = MessageVector::new(vec![0], 4).unwrap();
        let f = FeasibilityMatrix::build(&one, &mu, 4).unwrap();
        let want = [[0.7071, -0.7071], [0.7071, 0.7071]];
        for r in 0..2 {
            for c in 0..2 {
                assert!(close(f.lambda[(r, c)], want[r][c], 1e-4));
            }
        }
        let x = TernaryVector::new(vec![1, 0]).unwrap();
        let a = f.coefficients(&x).unwrap();
        assert!(close(a[0], 0.7071, 1e-4) && close(a[1], 0.7071, 1e-4));
        assert_eq!(f.coefficients(&TernaryVector::zeros(1)).unwrap(), vec![0.0, 0.0]);
        let neg = f.coefficients(&TernaryVector::new(vec![-1, 0]).unwrap()).unwrap();
        assert_eq!(neg, vec![-a[0], -a[1]]);

        let zero = ComplexMatrix::from_rows(&[vec![Complex64::new(0.0, 0.0)]]).unwrap();
        let f = FeasibilityMatrix::build(&zero, &mu, 4).unwrap();
        assert!(f.lambda.as_slice().iter().all(|&v| v == 0.0));

        let bad = MessageVector::new(vec![0, 1], 4).unwrap();
        assert!(matches!(FeasibilityMatrix::build(&one, &bad, 4), Err(Error::Dimension(_))));
        assert!(MessageVector::new(vec![4], 4).is_err());
        assert!(f.coefficients(&TernaryVector::zeros(2)).is_err());
    }
}
