//! Bit-level primitives on nonnegative integers: Hamming weight, 2-valuation,
//! fixed-width complement and circular (mod 2^k - 1) addition.
//!
//! Everything here is pure and cheap; the machine-word versions carry the hot
//! loops, the big-integer versions let moment accumulators reuse the same
//! definitions once sums outgrow 64 bits.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Number of 1-bits in the binary expansion of `n`.
#[inline]
pub fn hamming_weight(n: u64) -> u32 {
    n.count_ones()
}

/// Hamming weight of an arbitrary-precision integer.
#[inline]
pub fn hamming_weight_big(n: &BigUint) -> u64 {
    n.count_ones()
}

/// Exponent of the largest power of two dividing `n`. Undefined at zero.
#[inline]
pub fn two_valuation(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(Error::TwoValuationOfZero);
    }
    Ok(n.trailing_zeros())
}

/// 2-valuation of an arbitrary-precision integer.
pub fn two_valuation_big(n: &BigUint) -> Result<u64> {
    n.trailing_zeros().ok_or(Error::TwoValuationOfZero)
}

fn check_width(k: u32) -> Result<()> {
    if k == 0 || k > 63 {
        return Err(Error::KOutOfRange {
            k,
            reason: "machine-word operations need 1 <= k <= 63",
        });
    }
    Ok(())
}

fn check_instance(t: u64, k: u32) -> Result<()> {
    check_width(k)?;
    if t >> k != 0 {
        return Err(Error::TOutOfRange { t, k });
    }
    Ok(())
}

/// The k-bit complement 2^k - 1 - t, i.e. bitwise negation within k bits.
#[inline]
pub fn bit_complement(t: u64, k: u32) -> Result<u64> {
    check_instance(t, k)?;
    Ok(((1u64 << k) - 1) - t)
}

/// k-bit complement of an arbitrary-precision integer.
pub fn bit_complement_big(t: &BigUint, k: u64) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::KOutOfRange {
            k: 0,
            reason: "complement needs k >= 1",
        });
    }
    if t.bits() > k {
        return Err(Error::TOutOfRange {
            t: u64::MAX,
            k: k.min(u32::MAX as u64) as u32,
        });
    }
    let all_ones = (BigUint::from(1u8) << k) - 1u8;
    Ok(all_ones - t)
}

/// Circular addition (a + b) mod (2^k - 1): a carry out of bit k-1 wraps back
/// into bit 0, and the all-ones sum is identified with 0.
#[inline]
pub fn circular_add(a: u64, b: u64, k: u32) -> Result<u64> {
    check_instance(a, k)?;
    check_instance(b, k)?;
    let modulus = (1u64 << k) - 1;
    if modulus == 1 {
        return Ok(0);
    }
    Ok((a + b) % modulus)
}

/// Circular addition on arbitrary-precision integers.
pub fn circular_add_big(a: &BigUint, b: &BigUint, k: u64) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::KOutOfRange {
            k: 0,
            reason: "circular addition needs k >= 1",
        });
    }
    let modulus = (BigUint::from(1u8) << k) - 1u8;
    if modulus.is_zero() || modulus == BigUint::from(1u8) {
        return Ok(BigUint::zero());
    }
    Ok((a + b) % modulus)
}

/// A validated pair (t, k) with 0 <= t < 2^k, naming one instance of the
/// carry-counting problems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DigitContext {
    t: u64,
    k: u32,
}

impl DigitContext {
    pub fn new(t: u64, k: u32) -> Result<Self> {
        check_instance(t, k)?;
        Ok(DigitContext { t, k })
    }

    #[inline]
    pub fn t(&self) -> u64 {
        self.t
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    /// 2^k - 1 - t within the context's width.
    #[inline]
    pub fn complement(&self) -> u64 {
        ((1u64 << self.k) - 1) - self.t
    }

    /// Number of significant bits of t (0 for t = 0).
    #[inline]
    pub fn bit_length(&self) -> u32 {
        64 - self.t.leading_zeros()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn weight_examples() {
        assert_eq!(hamming_weight(0), 0);
        assert_eq!(hamming_weight(7), 3);
        assert_eq!(hamming_weight_big(&BigUint::from(7u8)), 3);
        // w(2^k - 1 - t) = k - w(t)
        for k in 1..=16u32 {
            for t in [0u64, 1, 2, (1 << k) - 1, (1 << k) / 3] {
                if t >> k != 0 {
                    continue;
                }
                let u = bit_complement(t, k).unwrap();
                assert_eq!(hamming_weight(u), k - hamming_weight(t));
            }
        }
    }

    #[test]
    fn two_valuation_examples() {
        assert_eq!(two_valuation(1).unwrap(), 0);
        assert_eq!(two_valuation(8).unwrap(), 3);
        assert_eq!(two_valuation(12).unwrap(), 2);
        assert_eq!(two_valuation(0), Err(Error::TwoValuationOfZero));
        assert_eq!(two_valuation_big(&BigUint::zero()), Err(Error::TwoValuationOfZero));
        assert_eq!(two_valuation_big(&BigUint::from(48u8)).unwrap(), 4);
    }

    #[test]
    fn complement_examples() {
        assert_eq!(bit_complement(0, 5).unwrap(), 31);
        assert_eq!(bit_complement(5, 3).unwrap(), 2);
        assert!(bit_complement(8, 3).is_err());
        assert_eq!(
            bit_complement_big(&BigUint::from(5u8), 3).unwrap(),
            BigUint::from(2u8)
        );
    }

    #[test]
    fn circular_add_examples() {
        assert_eq!(circular_add(3, 4, 3).unwrap(), 0); // a + b = 2^k - 1 collapses to 0
        assert_eq!(circular_add(5, 6, 3).unwrap(), 4);
        assert_eq!(circular_add(0, 5, 3).unwrap(), 5);
        assert!(circular_add(1, 1, 0).is_err());
        assert_eq!(
            circular_add_big(&BigUint::from(5u8), &BigUint::from(6u8), 3).unwrap(),
            BigUint::from(4u8)
        );
    }

    #[test]
    fn context_roundtrip() {
        let ctx = DigitContext::new(5, 3).unwrap();
        assert_eq!(ctx.complement(), 2);
        assert_eq!(ctx.bit_length(), 3);
        let back = DigitContext::new(ctx.complement(), 3).unwrap();
        assert_eq!(back.complement(), 5);
        assert!(DigitContext::new(8, 3).is_err());
    }

    proptest! {
        #[test]
        fn complement_weight_sum(k in 1u32..=63, raw in any::<u64>()) {
            let t = raw % (1u64 << k);
            let u = bit_complement(t, k).unwrap();
            prop_assert_eq!(hamming_weight(t) + hamming_weight(u), k);
            prop_assert_eq!(bit_complement(u, k).unwrap(), t);
        }

        #[test]
        fn circular_inverse_identity(k in 2u32..=16, a_raw in any::<u64>(), t_raw in any::<u64>()) {
            // (a (+) t) (+) t-complement = a  for t in {1,..,2^k-2}, a in {0,..,2^k-2}
            let modulus = (1u64 << k) - 1;
            let a = a_raw % modulus;
            let t = 1 + t_raw % (modulus - 1);
            let tc = bit_complement(t, k).unwrap();
            let step = circular_add(a, t, k).unwrap();
            prop_assert_eq!(circular_add(step, tc, k).unwrap(), a);
        }

        #[test]
        fn weight_step_valuation(n in 0u64..u64::MAX - 1) {
            // w(n+1) = w(n) + 1 - nu2(n+1)
            let lhs = hamming_weight(n + 1) as i64;
            let rhs = hamming_weight(n) as i64 + 1 - two_valuation(n + 1).unwrap() as i64;
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn big_and_word_agree(n in any::<u64>()) {
            prop_assert_eq!(hamming_weight_big(&BigUint::from(n)), hamming_weight(n) as u64);
            if n > 0 {
                prop_assert_eq!(
                    two_valuation_big(&BigUint::from(n)).unwrap(),
                    two_valuation(n).unwrap() as u64
                );
            }
        }
    }
}
