//! Exact rational helpers. Angles and areas are carried in units of π.

use num_integer::Integer;

pub type Rational = num_rational::Ratio<i64>;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num, den)
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n)
}

/// Nearest rational with denominator at most `max_den`, provided it lies within `tol` of `x`.
pub fn snap(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    (1..=max_den).find_map(|den| {
        let num = (x * den as f64).round();
        ((x - num / den as f64).abs() < tol).then(|| Rational::new(num as i64, den))
    })
}

pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Representative of `r` modulo 1 in `[0, 1)`.
pub fn frac(r: Rational) -> Rational {
    r - r.floor()
}

pub fn is_half_integer(r: Rational) -> bool {
    *r.denom() == 2
}

pub fn lcm(a: i64, b: i64) -> i64 {
    a.lcm(&b)
}

/// Parses `p/q`, a plain integer, or a decimal such as `1.3`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        return (q != 0).then(|| Rational::new(p, q));
    }
    if let Some((whole, dec)) = s.split_once('.') {
        if dec.is_empty() || dec.len() > 12 || !dec.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let neg = whole.starts_with('-');
        let whole: i64 = if whole.is_empty() || whole == "-" { 0 } else { whole.parse().ok()? };
        let den = 10i64.pow(dec.len() as u32);
        let frac: i64 = dec.parse().ok()?;
        let mag = whole.abs() * den + frac;
        return Some(Rational::new(if neg { -mag } else { mag }, den));
    }
    s.parse::<i64>().ok().map(Rational::from_integer)
}

/// Serde adapter writing a rational as `"p/q"` (or `"p"` when integral).
pub mod as_string {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(r)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }
}

/// Like [`as_string`] for sequences.
pub mod vec_as_string {
    use super::{parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(ToString::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .into_iter()
            .map(|s| parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snap_recovers_small_fractions() {
        assert_eq!(snap(0.75, 60, 1e-9), Some(rat(3, 4)));
        assert_eq!(snap(7.0 / 10.0, 60, 1e-9), Some(rat(7, 10)));
        assert_eq!(snap(std::f64::consts::SQRT_2, 60, 1e-9), None);
    }

    #[test]
    fn frac_is_in_unit_interval() {
        assert_eq!(frac(rat(-1, 3)), rat(2, 3));
        assert_eq!(frac(rat(7, 3)), rat(1, 3));
        assert_eq!(frac(int(2)), int(0));
    }

    #[test]
    fn parses_common_forms() {
        assert_eq!(parse_rational("13/10"), Some(rat(13, 10)));
        assert_eq!(parse_rational("1.3"), Some(rat(13, 10)));
        assert_eq!(parse_rational("-0.25"), Some(rat(-1, 4)));
        assert_eq!(parse_rational("2"), Some(int(2)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }
}
