//! Exact numbers of the form `r · π^{e/2}` with `r` rational, enough to
//! evaluate Γ at half-integers and the cosine-transform multipliers exactly.

use std::fmt;
use std::ops::{Div, Mul, Neg};

use num_rational::Ratio;

use crate::error::{Error, Result};

/// Minus sign used when rendering exact values (U+2212).
pub const MINUS: char = '\u{2212}';

/// `coeff · (√π)^sqrt_pi_power`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactValue {
    pub coeff: Ratio<i128>,
    pub sqrt_pi_power: i32,
}

impl ExactValue {
    pub fn integer(n: i128) -> Self {
        Self {
            coeff: Ratio::from_integer(n),
            sqrt_pi_power: 0,
        }
    }

    pub fn rational(num: i128, den: i128) -> Self {
        Self {
            coeff: Ratio::new(num, den),
            sqrt_pi_power: 0,
        }
    }

    pub fn pi() -> Self {
        Self {
            coeff: Ratio::from_integer(1),
            sqrt_pi_power: 2,
        }
    }

    pub fn sqrt_pi() -> Self {
        Self {
            coeff: Ratio::from_integer(1),
            sqrt_pi_power: 1,
        }
    }

    pub fn to_f64(self) -> f64 {
        let c = *self.coeff.numer() as f64 / *self.coeff.denom() as f64;
        c * std::f64::consts::PI.powf(self.sqrt_pi_power as f64 / 2.0)
    }

    pub fn is_negative(self) -> bool {
        self.coeff < Ratio::from_integer(0)
    }
}

impl Mul for ExactValue {
    type Output = ExactValue;
    fn mul(self, o: ExactValue) -> ExactValue {
        ExactValue {
            coeff: self.coeff * o.coeff,
            sqrt_pi_power: self.sqrt_pi_power + o.sqrt_pi_power,
        }
    }
}

impl Div for ExactValue {
    type Output = ExactValue;
    fn div(self, o: ExactValue) -> ExactValue {
        ExactValue {
            coeff: self.coeff / o.coeff,
            sqrt_pi_power: self.sqrt_pi_power - o.sqrt_pi_power,
        }
    }
}

impl Neg for ExactValue {
    type Output = ExactValue;
    fn neg(self) -> ExactValue {
        ExactValue {
            coeff: -self.coeff,
            sqrt_pi_power: self.sqrt_pi_power,
        }
    }
}

/// Renders `p/q`, `p/qπ`, `pπ/q` and so on, e.g. `32/105π` or `−1/10780`.
pub fn render(coeff: (i128, i128), sqrt_pi_power: i32) -> String {
    let (num, den) = coeff;
    let sign = if num < 0 {
        MINUS.to_string()
    } else {
        String::new()
    };
    let num = num.abs();
    let pi = |e: i32| match e {
        0 => String::new(),
        2 => "π".to_string(),
        1 => "√π".to_string(),
        e if e % 2 == 0 => format!("π^{}", e / 2),
        e => format!("π^({e}/2)"),
    };
    let body = match (sqrt_pi_power.signum(), den) {
        (0, 1) => num.to_string(),
        (0, _) => format!("{num}/{den}"),
        (1, 1) => format!("{num}{}", pi(sqrt_pi_power)),
        (1, _) => format!("{num}{}/{den}", pi(sqrt_pi_power)),
        (_, 1) => format!("{num}/{}", pi(-sqrt_pi_power)),
        (_, _) => format!("{num}/{den}{}", pi(-sqrt_pi_power)),
    };
    format!("{sign}{body}")
}

impl fmt::Display for ExactValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(
            (*self.coeff.numer(), *self.coeff.denom()),
            self.sqrt_pi_power,
        ))
    }
}

pub fn factorial(n: u32) -> i128 {
    (1..=n as i128).product()
}

/// `Γ(m/2)` for an integer `m`, exactly.
pub fn gamma_half(m: i64) -> Result<ExactValue> {
    if m <= 0 && m % 2 == 0 {
        return Err(Error::Pole(m as f64 / 2.0));
    }
    // climb or descend to Γ(1/2) = √π or Γ(1) = 1 using Γ(x + 1) = x Γ(x)
    let mut value = if m % 2 == 0 {
        ExactValue::integer(1)
    } else {
        ExactValue::sqrt_pi()
    };
    let base = if m % 2 == 0 { 2 } else { 1 };
    let mut x = base;
    while x < m {
        value = value * ExactValue::rational(x as i128, 2);
        x += 2;
    }
    while x > m {
        x -= 2;
        value = value / ExactValue::rational(x as i128, 2);
    }
    Ok(value)
}

/// Best rational approximation `p/q` of `x` with `q <= max_den` that agrees to
/// relative precision `rel_tol`, found from the continued fraction of `x`.
pub fn rational_approximation(x: f64, max_den: i128, rel_tol: f64) -> Option<(i128, i128)> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x.abs();
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e15 {
            break;
        }
        let a = a as i128;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let approx = h1 as f64 / k1 as f64;
        if (approx - x.abs()).abs() <= rel_tol * x.abs().max(f64::MIN_POSITIVE) {
            let sign = if x < 0.0 { -1 } else { 1 };
            return Some((sign * h1, k1));
        }
        let frac = r - a as f64;
        if frac <= 0.0 {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

/// Recognizes a float as `p/q` or `p/qπ` (the smaller denominator wins) and renders it.
pub fn reconstruct_string(x: f64) -> Option<String> {
    const MAX_DEN: i128 = 10_000_000;
    const TOL: f64 = 1e-11;
    let plain = rational_approximation(x, MAX_DEN, TOL).map(|r| (r, 0));
    let over_pi = rational_approximation(x * std::f64::consts::PI, MAX_DEN, TOL).map(|r| (r, -2));
    let best = match (plain, over_pi) {
        (Some(a), Some(b)) => Some(if b.0 .1 < a.0 .1 { b } else { a }),
        (a, b) => a.or(b),
    };
    best.map(|(r, e)| render(r, e))
}
