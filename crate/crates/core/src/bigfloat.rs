//! Binary floating point with an arbitrary, per-operation precision.
//!
//! A value is `mantissa * 2^exp`. Every operation takes the number of
//! mantissa bits to keep and truncates toward negative infinity; there is no
//! global rounding mode. This is only used for complex roots and moduli, where
//! results are compared against explicit tolerances.

use core::cmp::Ordering;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigFloat {
    mantissa: BigInt,
    exp: i64,
}

impl BigFloat {
    pub fn zero() -> Self {
        BigFloat { mantissa: BigInt::zero(), exp: 0 }
    }

    pub fn from_bigint(n: &BigInt, prec: u32) -> Self {
        Self::normalized(n.clone(), 0, prec)
    }

    pub fn from_i64(n: i64) -> Self {
        BigFloat { mantissa: BigInt::from(n), exp: 0 }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        Self::from_bigint(r.numer(), prec).div(&Self::from_bigint(r.denom(), prec), prec)
    }

    /// Exact conversion; NaN and infinities are not accepted.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite value {x}");
        if x == 0.0 {
            return Self::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        BigFloat { mantissa: BigInt::from(m) * sign, exp: e }
    }

    fn normalized(mantissa: BigInt, exp: i64, prec: u32) -> Self {
        let bits = mantissa.bits();
        if bits > prec as u64 {
            let shift = bits - prec as u64;
            BigFloat { mantissa: mantissa >> shift, exp: exp + shift as i64 }
        } else {
            BigFloat { mantissa, exp }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    /// `floor(log2 |x|)`, meaningless for zero.
    pub fn log2_floor(&self) -> i64 {
        self.mantissa.bits() as i64 - 1 + self.exp
    }

    pub fn neg(&self) -> Self {
        BigFloat { mantissa: -&self.mantissa, exp: self.exp }
    }

    pub fn abs(&self) -> Self {
        BigFloat { mantissa: self.mantissa.abs(), exp: self.exp }
    }

    pub fn add(&self, other: &Self, prec: u32) -> Self {
        if self.is_zero() {
            return Self::normalized(other.mantissa.clone(), other.exp, prec);
        }
        if other.is_zero() {
            return Self::normalized(self.mantissa.clone(), self.exp, prec);
        }
        let (hi, lo) = if self.exp >= other.exp { (self, other) } else { (other, self) };
        // An operand entirely below the kept precision only matters through
        // truncation, so it is replaced by one unit in a guard position.
        let gap = hi.log2_floor() - lo.log2_floor();
        if gap > prec as i64 + 2 {
            let guard = prec as i64 + 4 - (hi.mantissa.bits() as i64);
            let guard = guard.max(0) as u64;
            let hm = &hi.mantissa << guard;
            let bump = if lo.is_negative() { -1 } else { 1 };
            return Self::normalized(hm + bump, hi.exp - guard as i64, prec);
        }
        let shift = (hi.exp - lo.exp) as u64;
        let m = (&hi.mantissa << shift) + &lo.mantissa;
        Self::normalized(m, lo.exp, prec)
    }

    pub fn sub(&self, other: &Self, prec: u32) -> Self {
        self.add(&other.neg(), prec)
    }

    pub fn mul(&self, other: &Self, prec: u32) -> Self {
        Self::normalized(&self.mantissa * &other.mantissa, self.exp + other.exp, prec)
    }

    pub fn mul_i64(&self, c: i64, prec: u32) -> Self {
        Self::normalized(&self.mantissa * c, self.exp, prec)
    }

    pub fn div(&self, other: &Self, prec: u32) -> Self {
        assert!(!other.is_zero(), "BigFloat division by zero");
        let want = prec as i64 + 2 + other.mantissa.bits() as i64 - self.mantissa.bits() as i64;
        let shift = want.max(0) as u64;
        let num = &self.mantissa << shift;
        Self::normalized(num / &other.mantissa, self.exp - shift as i64 - other.exp, prec)
    }

    /// Square root of a nonnegative value.
    pub fn sqrt(&self, prec: u32) -> Self {
        assert!(!self.is_negative(), "square root of a negative BigFloat");
        if self.is_zero() {
            return Self::zero();
        }
        let target_bits = 2 * prec as i64 + 4;
        let mut shift = (target_bits - self.mantissa.bits() as i64).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = &self.mantissa << shift as u64;
        let e = self.exp - shift;
        Self::normalized(m.sqrt(), e / 2, prec)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits();
        let (m, e) = if bits > 60 {
            let s = bits - 60;
            (&self.mantissa >> s, self.exp + s as i64)
        } else {
            (self.mantissa.clone(), self.exp)
        };
        let mf = m.to_f64().expect("60-bit mantissa fits in f64");
        let e = e.clamp(i32::MIN as i64 / 2, i32::MAX as i64 / 2) as i32;
        libm::scalbn(mf, e)
    }

    /// Nearest integer (ties away from zero).
    pub fn round(&self) -> BigInt {
        if self.exp >= 0 {
            return &self.mantissa << self.exp as u64;
        }
        let shift = (-self.exp) as u64;
        let (sign, mag) = (self.mantissa.sign(), self.mantissa.abs());
        let half = BigInt::one() << (shift - 1);
        let r = (mag + half) >> shift;
        if sign == Sign::Minus {
            -r
        } else {
            r
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        // Exact difference: no precision cap.
        match self.sub(other, u32::MAX).mantissa.sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

/// Complex number over [`BigFloat`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn zero() -> Self {
        BigComplex { re: BigFloat::zero(), im: BigFloat::zero() }
    }

    pub fn from_real(re: BigFloat) -> Self {
        BigComplex { re, im: BigFloat::zero() }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        BigComplex { re: BigFloat::from_f64(re), im: BigFloat::from_f64(im) }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self, prec: u32) -> Self {
        BigComplex { re: self.re.add(&o.re, prec), im: self.im.add(&o.im, prec) }
    }

    pub fn sub(&self, o: &Self, prec: u32) -> Self {
        BigComplex { re: self.re.sub(&o.re, prec), im: self.im.sub(&o.im, prec) }
    }

    pub fn neg(&self) -> Self {
        BigComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &Self, prec: u32) -> Self {
        let w = prec + 8;
        let re = self.re.mul(&o.re, w).sub(&self.im.mul(&o.im, w), prec);
        let im = self.re.mul(&o.im, w).add(&self.im.mul(&o.re, w), prec);
        BigComplex { re, im }
    }

    pub fn scale(&self, c: &BigFloat, prec: u32) -> Self {
        BigComplex { re: self.re.mul(c, prec), im: self.im.mul(c, prec) }
    }

    /// `|z|^2`.
    pub fn norm_sqr(&self, prec: u32) -> BigFloat {
        let w = prec + 8;
        self.re.mul(&self.re, w).add(&self.im.mul(&self.im, w), prec)
    }

    pub fn abs(&self, prec: u32) -> BigFloat {
        self.norm_sqr(prec + 8).sqrt(prec)
    }

    pub fn div(&self, o: &Self, prec: u32) -> Self {
        let w = prec + 16;
        let den = o.norm_sqr(w);
        let n = self.mul(&o.conj(), w);
        BigComplex { re: n.re.div(&den, prec), im: n.im.div(&den, prec) }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// `e^{2 pi i j / n}`, refined by Newton's method on `z^n = 1` from the
    /// double-precision value.
    pub fn root_of_unity(j: u64, n: u64, prec: u32) -> Self {
        let j = j % n;
        if j == 0 {
            return BigComplex::from_real(BigFloat::from_i64(1));
        }
        let theta = 2.0 * core::f64::consts::PI * j as f64 / n as f64;
        let mut z = BigComplex::from_f64(libm::cos(theta), libm::sin(theta));
        let w = prec + 16;
        let one = BigComplex::from_real(BigFloat::from_i64(1));
        let nf = BigFloat::from_i64(n as i64);
        let mut good_bits = 48u32;
        while good_bits < w {
            let zn1 = z.powu(n - 1, w);
            let f = zn1.mul(&z, w).sub(&one, w);
            let df = zn1.scale(&nf, w);
            z = z.sub(&f.div(&df, w), w);
            good_bits *= 2;
        }
        // One extra step absorbs the rounding of the last iteration.
        let zn1 = z.powu(n - 1, w);
        let f = zn1.mul(&z, w).sub(&one, w);
        let df = zn1.scale(&nf, w);
        z.sub(&f.div(&df, w), prec)
    }

    pub fn powu(&self, mut e: u64, prec: u32) -> Self {
        let mut base = self.clone();
        let mut acc = BigComplex::from_real(BigFloat::from_i64(1));
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, prec);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, prec);
            }
        }
        acc
    }
}
