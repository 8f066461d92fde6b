//! Dense truncated power series in up to a handful of variables.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A power series truncated to a per-variable degree box, stored densely in
/// row-major order (first variable outermost, so the flat order is graded
/// lexicographic in the leading variable).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    vars: Vec<String>,
    bounds: Vec<usize>,
    strides: Vec<usize>,
    coeffs: Vec<BigRational>,
}

fn strides_for(bounds: &[usize]) -> (Vec<usize>, usize) {
    let dims = bounds.len();
    let mut strides = vec![1usize; dims];
    for d in (0..dims.saturating_sub(1)).rev() {
        strides[d] = strides[d + 1] * (bounds[d + 1] + 1);
    }
    let len = if dims == 0 {
        1
    } else {
        strides[0] * (bounds[0] + 1)
    };
    (strides, len)
}

/// Advances a multi-index bounded componentwise by `limit`, keeping `flat`
/// in sync; returns false after the last tuple.
fn advance(index: &mut [usize], limit: &[usize], strides: &[usize], flat: &mut usize) -> bool {
    for d in (0..index.len()).rev() {
        if index[d] < limit[d] {
            index[d] += 1;
            *flat += strides[d];
            return true;
        }
        *flat -= index[d] * strides[d];
        index[d] = 0;
    }
    false
}

impl TruncatedSeries {
    pub fn zero(vars: &[&str], bounds: &[usize]) -> Self {
        assert_eq!(vars.len(), bounds.len());
        let (strides, len) = strides_for(bounds);
        TruncatedSeries {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            bounds: bounds.to_vec(),
            strides,
            coeffs: vec![BigRational::zero(); len],
        }
    }

    pub fn constant(vars: &[&str], bounds: &[usize], value: BigRational) -> Self {
        let mut s = Self::zero(vars, bounds);
        s.coeffs[0] = value;
        s
    }

    pub fn one(vars: &[&str], bounds: &[usize]) -> Self {
        Self::constant(vars, bounds, BigRational::one())
    }

    /// The monomial for one variable; degenerates to zero if the box has no
    /// room for degree one.
    pub fn variable(vars: &[&str], bounds: &[usize], index: usize) -> Self {
        let mut s = Self::zero(vars, bounds);
        if bounds[index] >= 1 {
            let flat = s.strides[index];
            s.coeffs[flat] = BigRational::one();
        }
        s
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn bounds(&self) -> &[usize] {
        &self.bounds
    }

    fn shape_label(&self) -> String {
        format!("{:?}{:?}", self.vars, self.bounds)
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars || self.bounds != other.bounds {
            return Err(Error::ShapeMismatch(
                self.shape_label(),
                other.shape_label(),
            ));
        }
        Ok(())
    }

    fn check_exponents(&self, exponents: &[usize]) -> Result<usize> {
        if exponents.len() != self.bounds.len()
            || exponents.iter().zip(&self.bounds).any(|(e, b)| e > b)
        {
            return Err(Error::TruncationExceeded {
                at: format!("{exponents:?}"),
                bounds: format!("{:?}", self.bounds),
            });
        }
        Ok(exponents
            .iter()
            .zip(&self.strides)
            .map(|(e, s)| e * s)
            .sum())
    }

    pub fn coefficient(&self, exponents: &[usize]) -> Result<&BigRational> {
        let flat = self.check_exponents(exponents)?;
        Ok(&self.coeffs[flat])
    }

    /// Coefficient that must be an integer (fires the integrality assertion
    /// otherwise).
    pub fn integer_coefficient(&self, exponents: &[usize]) -> Result<BigInt> {
        let value = self.coefficient(exponents)?;
        if !value.denom().is_one() {
            return Err(Error::NonIntegerCoefficient {
                at: format!("{exponents:?}"),
                value: value.to_string(),
            });
        }
        Ok(value.numer().clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (o, c) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *o += c;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (o, c) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *o -= c;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.iter_mut() {
            *c *= factor;
        }
        out
    }

    /// Exact product inside the truncation box.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let dims = self.bounds.len();
        let mut out = Self::zero(
            &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            &self.bounds,
        );
        let bounds = self.bounds.clone();
        let mut e = vec![0usize; dims];
        let mut e_flat = 0usize;
        loop {
            let c1 = &self.coeffs[e_flat];
            if !c1.is_zero() {
                let room: Vec<usize> = bounds.iter().zip(&e).map(|(b, ei)| b - ei).collect();
                let mut f = vec![0usize; dims];
                let mut f_flat = 0usize;
                loop {
                    let c2 = &other.coeffs[f_flat];
                    if !c2.is_zero() {
                        out.coeffs[e_flat + f_flat] += c1 * c2;
                    }
                    if !advance(&mut f, &room, &self.strides, &mut f_flat) {
                        break;
                    }
                }
            }
            if !advance(&mut e, &bounds, &self.strides, &mut e_flat) {
                break;
            }
        }
        Ok(out)
    }

    /// Exact quotient; the divisor needs a nonzero constant term. Solved
    /// coefficient by coefficient in flat order, which refines the
    /// componentwise order the recurrence needs.
    pub fn div(&self, den: &Self) -> Result<Self> {
        self.check_same_shape(den)?;
        if den.coeffs[0].is_zero() {
            return Err(Error::NonUnitDivisor);
        }
        let lead_inv = den.coeffs[0].recip();
        let dims = self.bounds.len();
        let mut q = Self::zero(
            &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            &self.bounds,
        );
        let bounds = self.bounds.clone();
        let mut e = vec![0usize; dims];
        let mut e_flat = 0usize;
        loop {
            let mut acc = self.coeffs[e_flat].clone();
            // subtract den[f] * q[e-f] over 0 < f <= e
            let mut f = vec![0usize; dims];
            let mut f_flat = 0usize;
            loop {
                if !advance(&mut f, &e, &self.strides, &mut f_flat) {
                    break;
                }
                let d = &den.coeffs[f_flat];
                if !d.is_zero() {
                    let qv = &q.coeffs[e_flat - f_flat];
                    if !qv.is_zero() {
                        acc -= d * qv;
                    }
                }
            }
            if !acc.is_zero() {
                q.coeffs[e_flat] = acc * &lead_inv;
            }
            if !advance(&mut e, &bounds, &self.strides, &mut e_flat) {
                break;
            }
        }
        Ok(q)
    }

    pub fn inverse(&self) -> Result<Self> {
        let one = Self::one(
            &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            &self.bounds,
        );
        one.div(self)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut out = Self::one(
            &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            &self.bounds,
        );
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// All nonzero coefficients as (exponents, value), in flat order.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (Vec<usize>, &BigRational)> + '_ {
        let dims = self.bounds.len();
        let strides = self.strides.clone();
        let bounds = self.bounds.clone();
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(flat, c)| {
                let mut e = vec![0usize; dims];
                let mut rest = flat;
                for d in 0..dims {
                    e[d] = rest / strides[d];
                    rest %= strides[d];
                    debug_assert!(e[d] <= bounds[d]);
                }
                (e, c)
            })
    }

    /// Largest absolute denominator over the stored coefficients (1 for an
    /// integer series); used by integrality checks in bulk extractions.
    pub fn max_denominator(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.denom().abs())
            .max()
            .unwrap_or_else(BigInt::one)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn univariate(bound: usize) -> TruncatedSeries {
        TruncatedSeries::zero(&["y"], &[bound])
    }

    #[test]
    fn geometric_inverse() {
        // 1/(1-y) = 1 + y + y^2 + ..
        let one = TruncatedSeries::one(&["y"], &[10]);
        let y = TruncatedSeries::variable(&["y"], &[10], 0);
        let geo = one.sub(&y).unwrap().inverse().unwrap();
        for n in 0..=10 {
            assert_eq!(*geo.coefficient(&[n]).unwrap(), BigRational::one());
        }
        // 1/(1-4z) has coefficients 4^n
        let one = TruncatedSeries::one(&["z"], &[8]);
        let z4 = TruncatedSeries::variable(&["z"], &[8], 0)
            .scale(&BigRational::from_integer(BigInt::from(4)));
        let geo = one.sub(&z4).unwrap().inverse().unwrap();
        for n in 0..=8u32 {
            assert_eq!(
                *geo.coefficient(&[n as usize]).unwrap(),
                BigRational::from_integer(BigInt::from(4u64.pow(n)))
            );
        }
    }

    #[test]
    fn non_unit_division_rejected() {
        let y = TruncatedSeries::variable(&["y"], &[4], 0);
        assert!(matches!(y.inverse(), Err(Error::NonUnitDivisor)));
    }

    #[test]
    fn shape_mismatch_rejected() {
        let a = univariate(3);
        let b = univariate(4);
        assert!(matches!(a.add(&b), Err(Error::ShapeMismatch(_, _))));
    }

    #[test]
    fn integrality_assertion() {
        let half = TruncatedSeries::constant(
            &["y"],
            &[2],
            BigRational::new(BigInt::one(), BigInt::from(2)),
        );
        assert!(matches!(
            half.integer_coefficient(&[0]),
            Err(Error::NonIntegerCoefficient { .. })
        ));
        assert!(matches!(
            half.coefficient(&[3]),
            Err(Error::TruncationExceeded { .. })
        ));
    }

    fn arb_poly() -> impl Strategy<Value = TruncatedSeries> {
        proptest::collection::vec(-3i64..=3, 16).prop_map(|cs| {
            let mut s = TruncatedSeries::zero(&["x", "y"], &[3, 3]);
            for (flat, c) in cs.into_iter().enumerate() {
                s.coeffs[flat] = BigRational::from_integer(BigInt::from(c));
            }
            s
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            let ab = a.mul(&b).unwrap();
            let ba = b.mul(&a).unwrap();
            prop_assert_eq!(&ab, &ba);
            let left = ab.mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
            let dist_left = a.mul(&b.add(&c).unwrap()).unwrap();
            let dist_right = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(dist_left, dist_right);
        }

        #[test]
        fn inverse_roundtrip(a in arb_poly()) {
            prop_assume!(!a.coeffs[0].is_zero());
            let inv = a.inverse().unwrap();
            let product = a.mul(&inv).unwrap();
            let one = TruncatedSeries::one(&["x", "y"], &[3, 3]);
            prop_assert_eq!(product, one);
        }

        #[test]
        fn division_matches_mul(a in arb_poly(), b in arb_poly()) {
            prop_assume!(!b.coeffs[0].is_zero());
            let q = a.div(&b).unwrap();
            prop_assert_eq!(q.mul(&b).unwrap(), a);
        }
    }
}
