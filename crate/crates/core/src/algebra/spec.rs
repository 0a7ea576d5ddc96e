//! Ring construction descriptors and their text grammar.

use std::fmt;
use std::str::FromStr;

use super::poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    /// `Z n`
    Integers(u64),
    /// `GF p k [poly]`; `modulus` is `None` for the default polynomial.
    Galois { p: u32, k: u32, modulus: Option<Vec<u32>> },
    /// `M t (spec)`
    Matrix { t: usize, base: Box<RingSpec> },
    /// `PROD(spec, spec)`
    Product(Box<RingSpec>, Box<RingSpec>),
    /// `OP(spec)`
    Opposite(Box<RingSpec>),
    /// `POLYQ p poly`, the ring GF(p)[X]/(poly)
    PolyQuotient { p: u32, modulus: Vec<u32> },
    /// A ring produced by a construction (quotient, tensor, endomorphisms); not parseable.
    Derived(String),
}

impl RingSpec {
    pub fn is_derived(&self) -> bool {
        match self {
            RingSpec::Derived(_) => true,
            RingSpec::Matrix { base, .. } | RingSpec::Opposite(base) => base.is_derived(),
            RingSpec::Product(a, b) => a.is_derived() || b.is_derived(),
            _ => false,
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers(n) => write!(f, "Z {n}"),
            RingSpec::Galois { p, k, modulus: None } => write!(f, "GF {p} {k}"),
            RingSpec::Galois { p, k, modulus: Some(m) } => {
                write!(f, "GF {p} {k} {}", poly::format(m))
            }
            RingSpec::Matrix { t, base } => write!(f, "M {t} ({base})"),
            RingSpec::Product(a, b) => write!(f, "PROD({a}, {b})"),
            RingSpec::Opposite(a) => write!(f, "OP({a})"),
            RingSpec::PolyQuotient { p, modulus } => write!(f, "POLYQ {p} {}", poly::format(modulus)),
            RingSpec::Derived(s) => f.write_str(s),
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { s, pos: 0 };
        let spec = p.spec()?;
        p.ws();
        if p.pos != s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(spec)
    }
}

struct Parser<'a> {
    s: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, what: &str) -> Error {
        Error::MalformedSpec(format!("{what} at offset {} in '{}'", self.pos, self.s))
    }

    fn rest(&self) -> &str {
        &self.s[self.pos..]
    }

    fn ws(&mut self) {
        let r = self.rest();
        self.pos += r.len() - r.trim_start().len();
    }

    fn eat(&mut self, c: char) -> bool {
        self.ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn word(&mut self) -> &str {
        self.ws();
        let start = self.pos;
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_alphabetic())
            .unwrap_or(self.rest().len());
        self.pos += len;
        &self.s[start..start + len]
    }

    fn int(&mut self) -> Result<u64> {
        self.ws();
        let len = self
            .rest()
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.err("expected integer"));
        }
        let v = self.rest()[..len].parse().map_err(|_| self.err("integer overflow"))?;
        self.pos += len;
        Ok(v)
    }

    /// Raw text up to the next top-level ',' or ')' or the end.
    fn poly_text(&mut self) -> &str {
        let start = self.pos;
        let len = self.rest().find([',', ')']).unwrap_or(self.rest().len());
        self.pos += len;
        self.s[start..start + len].trim()
    }

    fn prime(&mut self) -> Result<u32> {
        let p = self.int()?;
        if !super::numtheory::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        u32::try_from(p).map_err(|_| Error::TooLarge(format!("prime {p}")))
    }

    fn inner(&mut self) -> Result<RingSpec> {
        if self.eat('(') {
            let s = self.spec()?;
            self.expect(')')?;
            Ok(s)
        } else {
            self.spec()
        }
    }

    fn spec(&mut self) -> Result<RingSpec> {
        let kw = self.word().to_ascii_uppercase();
        match kw.as_str() {
            "Z" => {
                let n = self.int()?;
                if n == 0 {
                    return Err(Error::ZeroModulus);
                }
                Ok(RingSpec::Integers(n))
            }
            "GF" => {
                let p = self.prime()?;
                let k = self.int()?;
                if k == 0 {
                    return Err(self.err("GF degree must be positive"));
                }
                let k = u32::try_from(k).map_err(|_| self.err("degree too large"))?;
                let text = self.poly_text().to_string();
                let modulus = if text.is_empty() {
                    None
                } else {
                    let f = poly::monic(&poly::parse(&text, p)?, p)?;
                    if poly::degree(&f) != Some(k as usize) {
                        return Err(Error::MalformedSpec(format!(
                            "polynomial {} does not have degree {k}",
                            poly::format(&f)
                        )));
                    }
                    if !poly::is_irreducible(&f, p) {
                        return Err(Error::Reducible(poly::format(&f)));
                    }
                    (f != poly::least_irreducible(p, k as usize)).then_some(f)
                };
                Ok(RingSpec::Galois { p, k, modulus })
            }
            "M" => {
                let t = self.int()? as usize;
                if t == 0 {
                    return Err(self.err("matrix size must be positive"));
                }
                Ok(RingSpec::Matrix { t, base: Box::new(self.inner()?) })
            }
            "PROD" => {
                self.expect('(')?;
                let a = self.spec()?;
                self.expect(',')?;
                let b = self.spec()?;
                self.expect(')')?;
                Ok(RingSpec::Product(Box::new(a), Box::new(b)))
            }
            "OP" => Ok(RingSpec::Opposite(Box::new(self.inner()?))),
            "POLYQ" => {
                let p = self.prime()?;
                let text = self.poly_text().to_string();
                let f = poly::parse(&text, p)?;
                if f.is_empty() {
                    return Err(Error::ZeroModulus);
                }
                let f = poly::monic(&f, p)?;
                if poly::degree(&f) == Some(0) {
                    return Err(Error::MalformedSpec("POLYQ modulus must have positive degree".into()));
                }
                Ok(RingSpec::PolyQuotient { p, modulus: f })
            }
            "" => Err(self.err("expected ring keyword")),
            other => Err(Error::MalformedSpec(format!("unknown ring keyword '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) -> String {
        s.parse::<RingSpec>().unwrap().to_string()
    }

    #[test]
    fn round_trips() {
        assert_eq!(rt("Z 6"), "Z 6");
        assert_eq!(rt("GF 2 2"), "GF 2 2");
        assert_eq!(rt("GF 2 2 X^2+X+1"), "GF 2 2");
        assert_eq!(rt("GF 3 2 1 1 2"), "GF 3 2 X^2+X+2");
        assert_eq!(rt("M 2 (GF 2 1)"), "M 2 (GF 2 1)");
        assert_eq!(rt("M 2 Z 4"), "M 2 (Z 4)");
        assert_eq!(rt("PROD(Z 2,Z 3)"), "PROD(Z 2, Z 3)");
        assert_eq!(rt("OP( M 2 (Z 2) )"), "OP(M 2 (Z 2))");
        assert_eq!(rt("POLYQ 2 X^2"), "POLYQ 2 X^2");
        assert_eq!(rt("PROD(GF 2 2 X^2+X+1, Z 3)"), "PROD(GF 2 2, Z 3)");
    }

    #[test]
    fn errors() {
        assert!(matches!("Z 0".parse::<RingSpec>(), Err(Error::ZeroModulus)));
        assert!(matches!("GF 4 1".parse::<RingSpec>(), Err(Error::NotPrime(4))));
        assert!(matches!("GF 2 2 X^2+1".parse::<RingSpec>(), Err(Error::Reducible(_))));
        assert!(matches!("GF 2 2 X^3+X+1".parse::<RingSpec>(), Err(Error::MalformedSpec(_))));
        assert!(matches!("Q 5".parse::<RingSpec>(), Err(Error::MalformedSpec(_))));
        assert!(matches!("Z 6 7".parse::<RingSpec>(), Err(Error::MalformedSpec(_))));
        assert!(matches!("PROD(Z 2 Z 3)".parse::<RingSpec>(), Err(Error::MalformedSpec(_))));
        assert!(matches!("POLYQ 2 0".parse::<RingSpec>(), Err(Error::ZeroModulus)));
        assert!(matches!("POLYQ 6 X".parse::<RingSpec>(), Err(Error::NotPrime(6))));
    }
}
