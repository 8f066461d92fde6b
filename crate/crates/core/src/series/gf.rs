//! The rational generating functions of the moment tables, described as
//! expression trees and expanded through exact series arithmetic.
//!
//! Coefficient conventions: in the bivariate functions, [x^k y^l] carries
//! the column sum at weight change k - l; in the tail-sum function it
//! carries the summed tail at threshold k - l; in the trivariate function,
//! [x^k y^l z^m] carries the second moment of the joint tails.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::ops::{Add, Div, Mul, Sub};

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// Symbolic rational expression over constants and variables; the leaves of
/// a `RationalFunctionSpec`.
#[derive(Debug, Clone)]
pub enum SeriesExpr {
    Constant(BigRational),
    Variable(usize),
    Add(Box<SeriesExpr>, Box<SeriesExpr>),
    Sub(Box<SeriesExpr>, Box<SeriesExpr>),
    Mul(Box<SeriesExpr>, Box<SeriesExpr>),
    Div(Box<SeriesExpr>, Box<SeriesExpr>),
}

impl Add for SeriesExpr {
    type Output = SeriesExpr;
    fn add(self, rhs: SeriesExpr) -> SeriesExpr {
        SeriesExpr::Add(Box::new(self), Box::new(rhs))
    }
}

impl Sub for SeriesExpr {
    type Output = SeriesExpr;
    fn sub(self, rhs: SeriesExpr) -> SeriesExpr {
        SeriesExpr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl Mul for SeriesExpr {
    type Output = SeriesExpr;
    fn mul(self, rhs: SeriesExpr) -> SeriesExpr {
        SeriesExpr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl Div for SeriesExpr {
    type Output = SeriesExpr;
    fn div(self, rhs: SeriesExpr) -> SeriesExpr {
        SeriesExpr::Div(Box::new(self), Box::new(rhs))
    }
}

fn int(n: i64) -> SeriesExpr {
    SeriesExpr::Constant(BigRational::from_integer(BigInt::from(n)))
}

/// A rational function together with its variable names, expandable into a
/// `TruncatedSeries`. Denominators must have a nonzero constant term.
#[derive(Debug, Clone)]
pub struct RationalFunctionSpec {
    vars: Vec<&'static str>,
    expr: SeriesExpr,
}

impl RationalFunctionSpec {
    pub fn new(vars: Vec<&'static str>, expr: SeriesExpr) -> Self {
        RationalFunctionSpec { vars, expr }
    }

    pub fn vars(&self) -> &[&'static str] {
        &self.vars
    }

    /// Exact expansion inside the truncation box (one inclusive degree
    /// bound per variable).
    pub fn expand(&self, bounds: &[usize]) -> Result<TruncatedSeries> {
        assert_eq!(bounds.len(), self.vars.len());
        eval(&self.expr, &self.vars, bounds)
    }
}

fn eval(expr: &SeriesExpr, vars: &[&'static str], bounds: &[usize]) -> Result<TruncatedSeries> {
    match expr {
        SeriesExpr::Constant(c) => Ok(TruncatedSeries::constant(vars, bounds, c.clone())),
        SeriesExpr::Variable(i) => Ok(TruncatedSeries::variable(vars, bounds, *i)),
        SeriesExpr::Add(a, b) => eval(a, vars, bounds)?.add(&eval(b, vars, bounds)?),
        SeriesExpr::Sub(a, b) => eval(a, vars, bounds)?.sub(&eval(b, vars, bounds)?),
        SeriesExpr::Mul(a, b) => eval(a, vars, bounds)?.mul(&eval(b, vars, bounds)?),
        SeriesExpr::Div(a, b) => eval(a, vars, bounds)?.div(&eval(b, vars, bounds)?),
    }
}

/// Generating function of the direct column sums:
/// (1 - 2xy - xy^2) / ((1-2xy)(1 - x(1+y)^2)).
pub fn first_moment_gf() -> RationalFunctionSpec {
    let x = || SeriesExpr::Variable(0);
    let y = || SeriesExpr::Variable(1);
    let one_minus_2xy = int(1) - int(2) * x() * y();
    let square = (int(1) + y()) * (int(1) + y());
    let numer = int(1) - int(2) * x() * y() - x() * y() * y();
    let denom = one_minus_2xy * (int(1) - x() * square);
    RationalFunctionSpec::new(vec!["x", "y"], numer / denom)
}

/// Generating function of the complemented column sums:
/// (1 - 2xy - x) / ((1-2xy)(1 - x(1+y)^2)).
pub fn complemented_first_moment_gf() -> RationalFunctionSpec {
    let x = || SeriesExpr::Variable(0);
    let y = || SeriesExpr::Variable(1);
    let square = (int(1) + y()) * (int(1) + y());
    let numer = int(1) - int(2) * x() * y() - x();
    let denom = (int(1) - int(2) * x() * y()) * (int(1) - x() * square);
    RationalFunctionSpec::new(vec!["x", "y"], numer / denom)
}

/// Generating function of the summed tails:
/// (2 - 4xy - x - xy^2) / ((1-y)(1-2xy)(1 - x(1+y)^2)).
pub fn tail_sum_gf() -> RationalFunctionSpec {
    let x = || SeriesExpr::Variable(0);
    let y = || SeriesExpr::Variable(1);
    let square = (int(1) + y()) * (int(1) + y());
    let numer = int(2) - int(4) * x() * y() - x() - x() * y() * y();
    let denom = (int(1) - y()) * (int(1) - int(2) * x() * y()) * (int(1) - x() * square);
    RationalFunctionSpec::new(vec!["x", "y"], numer / denom)
}

fn trivariate_pieces() -> (
    impl Fn() -> SeriesExpr,
    impl Fn() -> SeriesExpr,
    impl Fn() -> SeriesExpr,
) {
    (
        || SeriesExpr::Variable(0),
        || SeriesExpr::Variable(1),
        || SeriesExpr::Variable(2),
    )
}

/// Common denominator of the four product blocks:
/// 1 - x(1+yz)^2 - xyz/(1-2xy(1+yz)) - xyz/(1-2xz(1+yz)).
fn block_denominator() -> SeriesExpr {
    let (x, y, z) = trivariate_pieces();
    let u = || int(1) + y() * z();
    let gy = || int(1) - int(2) * x() * y() * u();
    let gz = || int(1) - int(2) * x() * z() * u();
    int(1) - x() * u() * u() - x() * y() * z() / gy() - x() * y() * z() / gz()
}

/// The four quadratic blocks, in the order direct*direct, direct*comp,
/// comp*direct, comp*comp.
pub fn second_moment_blocks() -> [RationalFunctionSpec; 4] {
    let (x, y, z) = trivariate_pieces();
    let u = || int(1) + y() * z();
    let gy = || int(1) - int(2) * x() * y() * u();
    let gz = || int(1) - int(2) * x() * z() * u();
    let g4 = || int(1) - int(4) * x() * y() * z();
    let d = block_denominator;

    let direct_direct = (int(1)
        - (x() * y() * y() * z() * z() / g4())
            * (int(1) + int(2) * x() * y() / gy() + int(2) * x() * z() / gz()))
        / d();
    let direct_comp = (int(1) / gz())
        * ((int(1) - x() * u() * u() - x() * y() * z() / gy() - x() * y() * z()) / d());
    let comp_direct = (int(1) / gy())
        * ((int(1) - x() * u() * u() - x() * y() * z() / gz() - x() * y() * z()) / d());
    let comp_comp = (int(1)
        - (x() / g4())
            * (int(1)
                + int(2) * x() * y() * y() * z() / gy()
                + int(2) * x() * y() * z() * z() / gz()))
        / d();

    let vars = vec!["x", "y", "z"];
    [
        RationalFunctionSpec::new(vars.clone(), direct_direct),
        RationalFunctionSpec::new(vars.clone(), direct_comp),
        RationalFunctionSpec::new(vars.clone(), comp_direct),
        RationalFunctionSpec::new(vars, comp_comp),
    ]
}

/// Sum of the four blocks (without the tail-accumulating prefactors).
pub fn block_sum_gf() -> RationalFunctionSpec {
    let [a, b, c, d] = second_moment_blocks();
    RationalFunctionSpec::new(
        vec!["x", "y", "z"],
        a.expr + b.expr + c.expr + d.expr,
    )
}

/// Full trivariate generating function of the joint-tail second moments:
/// the block sum times 1/((1-y)(1-z)).
pub fn second_moment_gf() -> RationalFunctionSpec {
    let (_, y, z) = trivariate_pieces();
    let blocks = block_sum_gf();
    RationalFunctionSpec::new(
        vec!["x", "y", "z"],
        blocks.expr / ((int(1) - y()) * (int(1) - z())),
    )
}

/// Coefficients of the shifted diagonal of the tail-sum function,
/// (4^k - C(2k,k))/2 for k = 0..=k_max (index k; the k = 0 slot is 0),
/// via the central-binomial recurrence.
pub fn diagonal_first_moment(k_max: u32) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(k_max as usize + 1);
    out.push(BigInt::from(0));
    let mut central = BigInt::one();
    for k in 1..=k_max as u64 {
        central = central * (4 * k - 2) / k;
        out.push(((BigInt::one() << (2 * k)) - &central) / 2);
    }
    out
}

/// Expanded trivariate function with cached coefficients up to x-degree
/// k_max (and the same bound on y and z).
pub struct SecondMomentSeries {
    k_max: u32,
    series: TruncatedSeries,
}

impl SecondMomentSeries {
    pub fn expand(k_max: u32) -> Result<SecondMomentSeries> {
        let bound = k_max as usize;
        let series = second_moment_gf().expand(&[bound, bound, bound])?;
        Ok(SecondMomentSeries { k_max, series })
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    pub fn coefficient(&self, k: u32, l: u32, m: u32) -> Result<BigInt> {
        self.series
            .integer_coefficient(&[k as usize, l as usize, m as usize])
    }
}

/// One trivariate coefficient, guarded by an x-degree budget (the expansion
/// cost grows like the fourth power of the budget).
pub fn trivariate_coefficient(k: u32, l: u32, m: u32, budget: u32) -> Result<BigInt> {
    if k > budget {
        return Err(Error::TruncationExceeded {
            at: format!("[{k}, {l}, {m}]"),
            bounds: format!("x-degree budget {budget}"),
        });
    }
    let bounds = [
        k as usize,
        (l.max(k)) as usize,
        (m.max(k)) as usize,
    ];
    let series = second_moment_gf().expand(&bounds)?;
    series.integer_coefficient(&[k as usize, l as usize, m as usize])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::{moment_tables, second_moment_tables};
    use num_traits::Zero;

    #[test]
    fn bivariate_matches_moment_tables() {
        let k_max = 8usize;
        let tables = moment_tables(k_max as u32);
        let f = first_moment_gf().expand(&[k_max, 2 * k_max]).unwrap();
        let ft = complemented_first_moment_gf()
            .expand(&[k_max, 2 * k_max])
            .unwrap();
        let g = tail_sum_gf().expand(&[k_max, 2 * k_max]).unwrap();
        for k in 0..=k_max {
            let table = &tables[k];
            for l in 0..=2 * k_max {
                let j = k as i64 - l as i64;
                assert_eq!(
                    f.integer_coefficient(&[k, l]).unwrap(),
                    table.m(j),
                    "direct k={k} l={l}"
                );
                assert_eq!(
                    ft.integer_coefficient(&[k, l]).unwrap(),
                    table.m_tilde(j),
                    "complemented k={k} l={l}"
                );
                assert_eq!(
                    g.integer_coefficient(&[k, l]).unwrap(),
                    table.tail(l as i64),
                    "tails k={k} l={l}"
                );
            }
        }
    }

    #[test]
    fn functional_equations() {
        let bounds = [8usize, 16usize];
        let x = TruncatedSeries::variable(&["x", "y"], &bounds, 0);
        let y = TruncatedSeries::variable(&["x", "y"], &bounds, 1);
        let one = TruncatedSeries::one(&["x", "y"], &bounds);
        let sq = one.add(&y).unwrap().pow(2).unwrap();
        let geo = one
            .sub(&x.mul(&y).unwrap().scale(&BigRational::from_integer(BigInt::from(2))))
            .unwrap();

        let f = first_moment_gf().expand(&bounds).unwrap();
        let rhs = one
            .add(&x.mul(&sq).unwrap().mul(&f).unwrap())
            .unwrap()
            .sub(&x.mul(&y).unwrap().mul(&y).unwrap().div(&geo).unwrap())
            .unwrap();
        assert_eq!(f, rhs);

        let ft = complemented_first_moment_gf().expand(&bounds).unwrap();
        let rhs = one
            .add(&x.mul(&sq).unwrap().mul(&ft).unwrap())
            .unwrap()
            .sub(&x.div(&geo).unwrap())
            .unwrap();
        assert_eq!(ft, rhs);

        // the tail-sum function accumulates the two column functions
        let g = tail_sum_gf().expand(&bounds).unwrap();
        let lhs = g.mul(&one.sub(&y).unwrap()).unwrap();
        assert_eq!(lhs, f.add(&ft).unwrap());
    }

    #[test]
    fn diagonal_sequence() {
        let diag = diagonal_first_moment(10);
        assert_eq!(diag[0], BigInt::zero());
        assert_eq!(diag[1], BigInt::from(1));
        assert_eq!(diag[2], BigInt::from(5));
        let g = tail_sum_gf().expand(&[10, 10]).unwrap();
        for k in 1..=10usize {
            assert_eq!(
                diag[k],
                g.integer_coefficient(&[k, k - 1]).unwrap(),
                "k={k}"
            );
        }
    }

    #[test]
    fn trivariate_small_values() {
        assert_eq!(trivariate_coefficient(1, 0, 0, 8).unwrap(), BigInt::from(1));
        assert!(matches!(
            trivariate_coefficient(9, 0, 0, 8),
            Err(Error::TruncationExceeded { .. })
        ));
    }

    #[test]
    fn trivariate_matches_second_moment_tables() {
        let k_max = 5u32;
        let series = SecondMomentSeries::expand(k_max).unwrap();
        let tables = second_moment_tables(k_max);
        for k in 0..=k_max {
            for l in 0..=k {
                for m in 0..=k {
                    assert_eq!(
                        series.coefficient(k, l, m).unwrap(),
                        tables[k as usize].m2(l as i64, m as i64),
                        "k={k} l={l} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn blocks_sum_to_assembled_function() {
        let bounds = [4usize, 4, 4];
        let blocks = second_moment_blocks();
        let mut total = TruncatedSeries::zero(&["x", "y", "z"], &bounds);
        for block in &blocks {
            total = total.add(&block.expand(&bounds).unwrap()).unwrap();
        }
        let assembled_blocks = block_sum_gf().expand(&bounds).unwrap();
        assert_eq!(total, assembled_blocks);

        let one = TruncatedSeries::one(&["x", "y", "z"], &bounds);
        let y = TruncatedSeries::variable(&["x", "y", "z"], &bounds, 1);
        let z = TruncatedSeries::variable(&["x", "y", "z"], &bounds, 2);
        let prefactor = one
            .sub(&y)
            .unwrap()
            .mul(&one.sub(&z).unwrap())
            .unwrap()
            .inverse()
            .unwrap();
        let full = second_moment_gf().expand(&bounds).unwrap();
        assert_eq!(full, total.mul(&prefactor).unwrap());
    }
}
