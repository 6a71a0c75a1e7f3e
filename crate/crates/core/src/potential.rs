//! π-periodic potentials given as finite Fourier series
//! `V(x) = Σ v_n e^{2inx}`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::C64;

/// A complex π-periodic potential with finitely many Fourier modes.
///
/// Coefficients with the same index are summed on construction; exact zeros
/// are kept out of the map so that structural queries such as
/// [`Potential::as_model`] look only at modes that are really present.
#[derive(Clone, PartialEq, Default)]
pub struct Potential {
    coeffs: BTreeMap<i32, C64>,
}

/// Symmetry flags of a potential, decided exactly from the coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Symmetry {
    /// `v_{-n} = conj(v_n)` for all `n`, i.e. `V` is real-valued.
    pub real_valued: bool,
    /// Every `v_n` is real, i.e. `conj(V(-x)) = V(x)`.
    pub pt_symmetric: bool,
}

impl Potential {
    pub fn new<I: IntoIterator<Item = (i32, C64)>>(coeffs: I) -> Self {
        let mut map = BTreeMap::new();
        for (n, v) in coeffs {
            *map.entry(n).or_insert(C64::new(0.0, 0.0)) += v;
        }
        map.retain(|_, v| *v != C64::new(0.0, 0.0));
        Self { coeffs: map }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C64) -> Self {
        Self::new([(0, c)])
    }

    /// The model potential `K e^{2ix}`.
    pub fn model(k: C64) -> Self {
        Self::new([(1, k)])
    }

    /// `2 q cos 2x`, the Mathieu-type real potential.
    pub fn mathieu(q: f64) -> Self {
        Self::new([(1, C64::new(q, 0.0)), (-1, C64::new(q, 0.0))])
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (i32, C64)> + '_ {
        self.coeffs.iter().map(|(&n, &v)| (n, v))
    }

    pub fn coeff(&self, n: i32) -> C64 {
        self.coeffs.get(&n).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Σ |v_n|`, an upper bound for `|V(x)|`.
    pub fn l1_norm(&self) -> f64 {
        self.coeffs.values().map(|v| v.norm()).sum()
    }

    /// Largest `|n|` present (0 for the zero potential).
    pub fn max_mode(&self) -> i32 {
        self.coeffs.keys().map(|n| n.abs()).max().unwrap_or(0)
    }

    /// `Some(c)` when `V ≡ c` (including the zero potential).
    pub fn as_constant(&self) -> Option<C64> {
        match self.coeffs.len() {
            0 => Some(C64::new(0.0, 0.0)),
            1 => self.coeffs.get(&0).copied(),
            _ => None,
        }
    }

    /// `Some(K)` when `V = K e^{2ix}` with `K ≠ 0`.
    pub fn as_model(&self) -> Option<C64> {
        if self.coeffs.len() == 1 {
            self.coeffs.get(&1).copied()
        } else {
            None
        }
    }

    pub fn eval(&self, x: f64) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        if self.coeffs.is_empty() {
            return acc;
        }
        let w = C64::cis(2.0 * x);
        let max = self.max_mode();
        if max <= 8 {
            // powers of w by repeated multiplication
            let mut pos = [C64::new(1.0, 0.0); 9];
            for k in 1..=max as usize {
                pos[k] = pos[k - 1] * w;
            }
            for (&n, &v) in &self.coeffs {
                let p = pos[n.unsigned_abs() as usize];
                acc += v * if n >= 0 { p } else { p.conj() };
            }
        } else {
            for (&n, &v) in &self.coeffs {
                acc += v * C64::cis(2.0 * n as f64 * x);
            }
        }
        acc
    }

    pub fn classify_symmetry(&self) -> Symmetry {
        let real_valued = self
            .coeffs
            .iter()
            .all(|(&n, &v)| self.coeff(-n) == v.conj());
        let pt_symmetric = self.coeffs.values().all(|v| v.im == 0.0);
        Symmetry {
            real_valued,
            pt_symmetric,
        }
    }

    /// The potential `x ↦ V(x + shift)`.
    pub fn shifted(&self, shift: f64) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .map(|(&n, &v)| (n, v * C64::cis(2.0 * n as f64 * shift))),
        )
    }
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffRecord {
    n: i32,
    re: f64,
    #[serde(default)]
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct PotentialRecord {
    coeffs: Vec<CoeffRecord>,
}

impl Serialize for Potential {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PotentialRecord {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&n, v)| CoeffRecord {
                    n,
                    re: v.re,
                    im: v.im,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Potential {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rec = PotentialRecord::deserialize(d)?;
        if rec.coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(serde::de::Error::custom("non-finite Fourier coefficient"));
        }
        Ok(Potential::new(
            rec.coeffs.into_iter().map(|c| (c.n, C64::new(c.re, c.im))),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(Potential::constant(c(3.0, 0.0)).eval(1.7), c(3.0, 0.0));
        assert!((Potential::model(c(1.0, 0.0)).eval(0.0) - c(1.0, 0.0)).norm() < 1e-15);
        assert!((Potential::model(c(1.0, 0.0)).eval(PI / 2.0) - c(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn model_construction() {
        let p = Potential::model(c(1.0, 0.0));
        assert_eq!(p.coeffs().collect::<Vec<_>>(), vec![(1, c(1.0, 0.0))]);
        assert!(Potential::model(c(0.0, 0.0)).is_zero());
        assert_eq!(p.as_model(), Some(c(1.0, 0.0)));
        assert_eq!(p.as_constant(), None);
    }

    #[test]
    fn rotated_model_is_a_shift() {
        let phi0 = 0.37;
        let k = C64::from_polar(1.8, 2.0 * phi0);
        let rotated = Potential::model(k);
        let plain = Potential::model(c(1.8, 0.0));
        for i in 0..20 {
            let x = -3.0 + 0.31 * i as f64;
            assert!((rotated.eval(x) - plain.eval(x + phi0)).norm() < 1e-14);
        }
    }

    #[test]
    fn symmetry_examples() {
        let s = Potential::model(c(1.0, 0.0)).classify_symmetry();
        assert_eq!(s, Symmetry { real_valued: false, pt_symmetric: true });
        let s = Potential::mathieu(1.0).classify_symmetry();
        assert_eq!(s, Symmetry { real_valued: true, pt_symmetric: true });
        let s = Potential::model(c(0.0, 1.0)).classify_symmetry();
        assert_eq!(s, Symmetry { real_valued: false, pt_symmetric: false });
        let s = Potential::zero().classify_symmetry();
        assert!(s.real_valued && s.pt_symmetric);
    }

    #[test]
    fn json_shape() {
        let p: Potential = serde_json::from_str(
            r#"{"coeffs":[{"n":1,"re":0.5,"im":-2.0},{"n":-3,"re":1.0,"im":0.0}]}"#,
        )
        .unwrap();
        assert_eq!(p.coeff(1), c(0.5, -2.0));
        assert_eq!(p.coeff(-3), c(1.0, 0.0));
        assert_eq!(p.max_mode(), 3);
        let back: Potential = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    proptest! {
        #[test]
        fn period_pi(x in -50.0f64..50.0, a in -3.0f64..3.0, b in -3.0f64..3.0, n in -5i32..=5) {
            let p = Potential::new([(n, C64::new(a, b)), (0, C64::new(b, a))]);
            let d = (p.eval(x + PI) - p.eval(x)).norm();
            prop_assert!(d < 1e-12 * (1.0 + p.l1_norm()) * (1.0 + x.abs()));
        }

        #[test]
        fn pt_symmetric_means_conjugate_reflection(
            x in -10.0f64..10.0,
            v in proptest::collection::vec((-4i32..=4, -2.0f64..2.0), 1..6),
        ) {
            let p = Potential::new(v.into_iter().map(|(n, r)| (n, C64::new(r, 0.0))));
            prop_assert!(p.classify_symmetry().pt_symmetric);
            let d = (p.eval(-x).conj() - p.eval(x)).norm();
            prop_assert!(d < 1e-13 * (1.0 + p.l1_norm()));
        }
    }
}
