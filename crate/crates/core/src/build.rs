//! Ring constructors and the JSON ring description format.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::ring::{Elem, FiniteRing, Presentation, RingError, Subalgebra};

/// Integers modulo `n`.
pub fn zmod(n: u64, cap: usize) -> Result<FiniteRing, RingError> {
    if n == 0 {
        return Err(RingError::InfiniteGroup);
    }
    let p = Presentation::diagonal(&[n], vec![vec![vec![1]]], vec![1]);
    FiniteRing::from_presentation(format!("Z/{n}"), &p, cap)
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

fn poly_rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    // f monic
    let mut a = a.to_vec();
    let df = f.len() - 1;
    while a.len() > df {
        let lead = a.pop().unwrap();
        if lead != 0 {
            let shift = a.len() - df;
            for (i, &c) in f[..df].iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - lead * c % p) % p;
            }
        }
    }
    a
}

fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    // trial division by every monic polynomial of degree 1..=n/2
    for d in 1..=n / 2 {
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut g: Vec<u64> = (0..d).map(|i| code / p.pow(i as u32) % p).collect();
            g.push(1);
            if poly_rem(f, &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// First monic irreducible polynomial of degree `k` over F_p, coefficients low to high.
pub fn irreducible_polynomial(p: u64, k: u32) -> Vec<u64> {
    let count = p.pow(k);
    for code in 0..count {
        let mut f: Vec<u64> = (0..k).map(|i| code / p.pow(i) % p).collect();
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// The field with `q` elements.
pub fn gf(q: u64, cap: usize) -> Result<FiniteRing, RingError> {
    let (p, k) = prime_power(q).ok_or(RingError::NotPrimePower(q))?;
    if q as u128 > cap as u128 {
        return Err(RingError::SizeCapExceeded { size: q as u128, cap });
    }
    let base = zmod(p, cap)?;
    let f: Vec<Elem> = irreducible_polynomial(p, k).iter().map(|&c| base.scale(c as i128, base.one())).collect();
    Ok(poly_quot(&base, &f, cap)?.with_name(format!("F{q}")))
}

/// `base[x]/(f)` for a monic `f` given low to high with coefficients in `base`.
pub fn poly_quot(base: &FiniteRing, f: &[Elem], cap: usize) -> Result<FiniteRing, RingError> {
    if f.len() < 2 || *f.last().unwrap() != base.one() {
        return Err(RingError::NotMonic);
    }
    let m = f.len() - 1;
    let l = base.rank();
    let size = (base.size() as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(RingError::SizeCapExceeded { size, cap });
    }
    // polynomial product reduced modulo f
    let poly_mul = |a: &[Elem], b: &[Elem]| -> Vec<Elem> {
        let mut c = vec![base.zero(); 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                c[i + j] = base.add(c[i + j], base.mul(x, y));
            }
        }
        while c.len() > m {
            let lead = c.pop().unwrap();
            let shift = c.len() - m;
            for (i, &fc) in f[..m].iter().enumerate() {
                c[shift + i] = base.sub(c[shift + i], base.mul(lead, fc));
            }
        }
        c
    };
    let to_raw = |poly: &[Elem]| -> Vec<i128> {
        poly.iter().flat_map(|&c| base.coords(c).into_iter().map(|v| v as i128)).collect()
    };
    // raw generator (s, i) is the s-th base generator times x^i
    let gen_poly = |s: usize, i: usize| -> Vec<Elem> {
        let mut v = vec![base.zero(); m];
        v[i] = base.generator(s);
        v
    };
    let mut orders = Vec::with_capacity(m * l);
    let mut gens = Vec::with_capacity(m * l);
    for i in 0..m {
        for s in 0..l {
            orders.push(base.invariants()[s]);
            gens.push(gen_poly(s, i));
        }
    }
    let products = gens.iter().map(|a| gens.iter().map(|b| to_raw(&poly_mul(a, b))).collect()).collect();
    let mut unit = vec![base.zero(); m];
    unit[0] = base.one();
    let pres = Presentation::diagonal(&orders, products, to_raw(&unit));
    FiniteRing::from_presentation(format!("{}[x]/(f)", base.name()), &pres, cap)
}

/// Direct product of rings.
pub fn product(factors: &[&FiniteRing], cap: usize) -> Result<FiniteRing, RingError> {
    let size = factors.iter().try_fold(1u128, |acc, r| acc.checked_mul(r.size() as u128)).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(RingError::SizeCapExceeded { size, cap });
    }
    let total: usize = factors.iter().map(|r| r.rank()).sum();
    let mut orders = Vec::with_capacity(total);
    let mut products = vec![vec![vec![0i128; total]; total]; total];
    let mut unit = Vec::with_capacity(total);
    let mut offset = 0;
    for r in factors {
        let k = r.rank();
        orders.extend_from_slice(r.invariants());
        for i in 0..k {
            for j in 0..k {
                for (t, &c) in r.structure_constants()[i * k + j].iter().enumerate() {
                    products[offset + i][offset + j][offset + t] = c as i128;
                }
            }
        }
        unit.extend(r.unit_coords().iter().map(|&c| c as i128));
        offset += k;
    }
    let name = factors.iter().map(|r| r.name()).collect::<Vec<_>>().join(" x ");
    let pres = Presentation::diagonal(&orders, products, unit);
    FiniteRing::from_presentation(name, &pres, cap)
}

/// JSON description of a ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(flatten)]
    pub kind: RingKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "parameters", rename_all = "snake_case")]
pub enum RingKind {
    Zmod {
        n: u64,
    },
    Gf {
        q: u64,
    },
    /// Coefficients of a monic modulus, constant term first, in the base ring's notation.
    PolyQuot {
        base: Box<RingSpec>,
        modulus: Vec<Value>,
    },
    Product {
        factors: Vec<RingSpec>,
    },
    Subalgebra {
        ambient: Box<RingSpec>,
        generators: Vec<Value>,
    },
}

impl RingSpec {
    pub fn new(kind: RingKind) -> Self {
        RingSpec { name: None, kind }
    }

    pub fn zmod(n: u64) -> Self {
        Self::new(RingKind::Zmod { n })
    }

    pub fn gf(q: u64) -> Self {
        Self::new(RingKind::Gf { q })
    }

    pub fn poly_quot(base: RingSpec, modulus: Vec<Value>) -> Self {
        Self::new(RingKind::PolyQuot { base: Box::new(base), modulus })
    }

    pub fn product(factors: Vec<RingSpec>) -> Self {
        Self::new(RingKind::Product { factors })
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn build(&self, cap: usize) -> Result<BuiltRing, RingError> {
        BuiltRing::build(self, cap)
    }
}

#[derive(Debug, Clone)]
enum Node {
    Plain,
    Poly { base: Box<BuiltRing>, degree: usize },
    Product { factors: Vec<BuiltRing> },
    Sub { ambient: Box<BuiltRing>, sub: Box<Subalgebra> },
}

/// A ring built from a [`RingSpec`], able to read elements written in the spec's notation.
#[derive(Debug, Clone)]
pub struct BuiltRing {
    pub ring: Arc<FiniteRing>,
    node: Node,
}

impl BuiltRing {
    fn build(spec: &RingSpec, cap: usize) -> Result<Self, RingError> {
        let (ring, node) = match &spec.kind {
            RingKind::Zmod { n } => (zmod(*n, cap)?, Node::Plain),
            RingKind::Gf { q } => {
                let (p, k) = prime_power(*q).ok_or(RingError::NotPrimePower(*q))?;
                let base = BuiltRing { ring: Arc::new(zmod(p, cap)?), node: Node::Plain };
                let ring = gf(*q, cap)?;
                (ring, Node::Poly { base: Box::new(base), degree: k as usize })
            }
            RingKind::PolyQuot { base, modulus } => {
                let base = BuiltRing::build(base, cap)?;
                let f = modulus.iter().map(|v| base.parse_element(v)).collect::<Result<Vec<_>, _>>()?;
                let ring = poly_quot(&base.ring, &f, cap)?;
                let degree = f.len() - 1;
                (ring, Node::Poly { base: Box::new(base), degree })
            }
            RingKind::Product { factors } => {
                if factors.is_empty() {
                    return Err(RingError::Notation("a product needs at least one factor".into()));
                }
                let built = factors.iter().map(|f| BuiltRing::build(f, cap)).collect::<Result<Vec<_>, _>>()?;
                let refs: Vec<&FiniteRing> = built.iter().map(|b| b.ring.as_ref()).collect();
                (product(&refs, cap)?, Node::Product { factors: built })
            }
            RingKind::Subalgebra { ambient, generators } => {
                let amb = BuiltRing::build(ambient, cap)?;
                let gens = generators.iter().map(|v| amb.parse_element(v)).collect::<Result<Vec<_>, _>>()?;
                let set = amb.ring.subring_generated(&gens);
                let sub = amb.ring.subalgebra(&set, format!("sub({})", amb.ring.name()), cap)?;
                (sub.ring.clone(), Node::Sub { ambient: Box::new(amb), sub: Box::new(sub) })
            }
        };
        let ring = match &spec.name {
            Some(n) => ring.with_name(n.clone()),
            None => ring,
        };
        Ok(BuiltRing { ring: Arc::new(ring), node })
    }

    /// Reads an element. An integer always means that multiple of 1.
    pub fn parse_element(&self, v: &Value) -> Result<Elem, RingError> {
        if let Some(n) = v.as_i64() {
            return Ok(self.ring.scale(n as i128, self.ring.one()));
        }
        let items =
            v.as_array().ok_or_else(|| RingError::Notation(format!("expected an integer or a list, found {v}")))?;
        match &self.node {
            Node::Plain => Err(RingError::Notation(format!("{} elements are written as integers", self.ring.name()))),
            Node::Poly { base, degree } => {
                if items.len() > *degree {
                    return Err(RingError::Notation(format!(
                        "at most {degree} coefficients expected, found {}",
                        items.len()
                    )));
                }
                let mut raw = Vec::new();
                for i in 0..*degree {
                    let c = match items.get(i) {
                        Some(x) => base.parse_element(x)?,
                        None => base.ring.zero(),
                    };
                    raw.extend(base.ring.coords(c).into_iter().map(|x| x as i128));
                }
                Ok(self.ring.reduce_raw(&raw))
            }
            Node::Product { factors } => {
                if items.len() != factors.len() {
                    return Err(RingError::Notation(format!(
                        "{} components expected, found {}",
                        factors.len(),
                        items.len()
                    )));
                }
                let mut raw = Vec::new();
                for (f, x) in factors.iter().zip(items) {
                    let c = f.parse_element(x)?;
                    raw.extend(f.ring.coords(c).into_iter().map(|x| x as i128));
                }
                Ok(self.ring.reduce_raw(&raw))
            }
            Node::Sub { ambient, sub } => {
                let x = ambient.parse_element(v)?;
                sub.restrict(x).ok_or(RingError::NotAMember)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::DEFAULT_SIZE_CAP;
    use serde_json::json;

    #[test]
    fn finite_fields_have_prime_power_order() {
        for q in [2, 3, 4, 8, 9, 16, 25, 27] {
            let f = gf(q, DEFAULT_SIZE_CAP).unwrap();
            assert_eq!(f.size(), q as usize);
            // every nonzero element is a unit
            for x in 1..f.size() as Elem {
                assert!(f.elements().any(|y| f.mul(x, y) == f.one()), "F{q}: {x} has no inverse");
            }
        }
        assert_eq!(gf(6, DEFAULT_SIZE_CAP).unwrap_err(), RingError::NotPrimePower(6));
    }

    #[test]
    fn product_normalizes_coprime_orders() {
        let a = zmod(2, 100).unwrap();
        let b = zmod(3, 100).unwrap();
        let r = product(&[&a, &b], 100).unwrap();
        assert_eq!(r.invariants(), &[6]);
    }

    #[test]
    fn spec_round_trip_and_notation() {
        let text = r#"{"kind":"product","parameters":{"factors":[
            {"kind":"gf","parameters":{"q":4}},
            {"kind":"zmod","parameters":{"n":3}}]},"name":"F4 x Z/3"}"#;
        let spec: RingSpec = serde_json::from_str(text).unwrap();
        let built = spec.build(DEFAULT_SIZE_CAP).unwrap();
        let r = &built.ring;
        assert_eq!(r.size(), 12);
        assert_eq!(r.name(), "F4 x Z/3");
        let w = built.parse_element(&json!([[0, 1], 0])).unwrap();
        let w3 = r.pow(w, 3);
        let e = built.parse_element(&json!([1, 0])).unwrap();
        assert_eq!(w3, e);
        assert_eq!(built.parse_element(&json!(1)).unwrap(), r.one());
        let back: RingSpec = serde_json::from_value(serde_json::to_value(&spec).unwrap()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn dual_numbers_over_z9() {
        let spec = RingSpec::poly_quot(RingSpec::zmod(9), vec![json!(0), json!(0), json!(1)]);
        let built = spec.build(DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(built.ring.invariants(), &[9, 9]);
        let z = built.parse_element(&json!([0, 1])).unwrap();
        assert_eq!(built.ring.mul(z, z), 0);
    }

    #[test]
    fn subalgebra_spec() {
        let spec = RingSpec::new(RingKind::Subalgebra {
            ambient: Box::new(RingSpec::product(vec![RingSpec::gf(4), RingSpec::gf(4)])),
            generators: vec![json!([[1], 0])],
        });
        let built = spec.build(DEFAULT_SIZE_CAP).unwrap();
        assert_eq!(built.ring.size(), 4);
        assert_eq!(built.ring.invariants(), &[2, 2]);
        assert!(built.parse_element(&json!([[0, 1], 0])).is_err());
    }
}
