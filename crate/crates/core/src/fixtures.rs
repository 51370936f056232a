//! Extension spec files and the built-in catalogue of instances.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::build::RingSpec;
use crate::composite::{ComponentSpec, Composite, CompositeSpec, LabeledLattice};
use crate::extension::{AnalysisError, Extension};
use crate::interval::Limits;
use crate::poset::SupportPoset;
use crate::ring::RingError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("top generators do not contain the base")]
    BaseNotInTop,
    #[error("unknown fixture {0:?}")]
    Unknown(String),
}

/// `R ⊆ S` inside one ambient ring: `R` is generated by 1 and `base`, `S` by 1 and `top`
/// (the whole ambient ring when `top` is absent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionSpec {
    pub name: String,
    pub ambient: RingSpec,
    #[serde(default)]
    pub base: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top: Option<Vec<Value>>,
}

impl ExtensionSpec {
    pub fn new(name: &str, ambient: RingSpec, base: Vec<Value>) -> Self {
        ExtensionSpec { name: name.to_string(), ambient, base, top: None }
    }

    pub fn build(&self, limits: Limits) -> Result<Extension, FixtureError> {
        let built = self.ambient.build(limits.size_cap)?;
        let ring: Arc<_> = built.ring.clone();
        let gens = |vals: &[Value]| vals.iter().map(|v| built.parse_element(v)).collect::<Result<Vec<_>, _>>();
        let base = ring.subring_generated(&gens(&self.base)?);
        let top = match &self.top {
            Some(t) => ring.subring_generated(&gens(t)?),
            None => ring.full_set(),
        };
        if !base.is_subset(&top) {
            return Err(FixtureError::BaseNotInTop);
        }
        Ok(Extension::between(self.name.clone(), ring, &base, &top, limits)?)
    }
}

/// Where an expected value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Origin {
    /// Stated outright in the reference text.
    Reference,
    /// Computed by an independent brute-force oracle.
    Derived,
    /// Immediate from the definitions.
    Trivial,
    /// Pinned by the user on the command line.
    User,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureClass {
    Extension,
    Poset,
    Labeled,
    Composite,
}

/// A catalogue entry.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixtureInfo {
    pub name: &'static str,
    pub class: FixtureClass,
    pub origin: Origin,
    pub summary: &'static str,
}

fn f(n: u64) -> RingSpec {
    RingSpec::gf(n)
}

fn z(n: u64) -> RingSpec {
    RingSpec::zmod(n)
}

fn dual(base: RingSpec) -> RingSpec {
    RingSpec::poly_quot(base, vec![json!(0), json!(0), json!(1)])
}

fn prod(v: Vec<RingSpec>) -> RingSpec {
    RingSpec::product(v)
}

struct Entry {
    name: &'static str,
    origin: Origin,
    summary: &'static str,
    spec: fn() -> ExtensionSpec,
}

const EXTENSIONS: &[Entry] = &[
    Entry {
        name: "trivial",
        origin: Origin::Trivial,
        summary: "F4 over itself",
        spec: || ExtensionSpec::new("trivial", f(4), vec![json!([0, 1])]),
    },
    Entry {
        name: "f2-in-f4",
        origin: Origin::Derived,
        summary: "minimal inert",
        spec: || ExtensionSpec::new("f2-in-f4", f(4), vec![]),
    },
    Entry {
        name: "f2-in-f8",
        origin: Origin::Derived,
        summary: "minimal inert of degree 3",
        spec: || ExtensionSpec::new("f2-in-f8", f(8), vec![]),
    },
    Entry {
        name: "f2-in-f16",
        origin: Origin::Derived,
        summary: "chain F2 < F4 < F16",
        spec: || ExtensionSpec::new("f2-in-f16", f(16), vec![]),
    },
    Entry {
        name: "f3-in-f9",
        origin: Origin::Derived,
        summary: "minimal inert in odd characteristic",
        spec: || ExtensionSpec::new("f3-in-f9", f(9), vec![]),
    },
    Entry {
        name: "f2-in-dual",
        origin: Origin::Derived,
        summary: "F2 in F2[z]/(z^2), minimal ramified",
        spec: || ExtensionSpec::new("f2-in-dual", dual(z(2)), vec![]),
    },
    Entry {
        name: "diagonal-f2^2",
        origin: Origin::Derived,
        summary: "F2 diagonal in F2^2, minimal decomposed",
        spec: || ExtensionSpec::new("diagonal-f2^2", prod(vec![z(2), z(2)]), vec![]),
    },
    Entry {
        name: "diagonal-f2^3",
        origin: Origin::Derived,
        summary: "F2 diagonal in F2^3",
        spec: || ExtensionSpec::new("diagonal-f2^3", prod(vec![z(2), z(2), z(2)]), vec![]),
    },
    Entry {
        name: "diagonal-f2^4",
        origin: Origin::Derived,
        summary: "F2 diagonal in F2^4",
        spec: || ExtensionSpec::new("diagonal-f2^4", prod(vec![z(2), z(2), z(2), z(2)]), vec![]),
    },
    Entry {
        name: "f2^2-in-f4^2",
        origin: Origin::Derived,
        summary: "F2^2 in F4^2, Boolean of rank 2",
        spec: || ExtensionSpec::new("f2^2-in-f4^2", prod(vec![f(4), f(4)]), vec![json!([1, 0])]),
    },
    Entry {
        name: "f2^3-in-f4^3",
        origin: Origin::Derived,
        summary: "F2^3 in F4^3, Boolean of rank 3",
        spec: || {
            ExtensionSpec::new("f2^3-in-f4^3", prod(vec![f(4), f(4), f(4)]), vec![json!([1, 0, 0]), json!([0, 1, 0])])
        },
    },
    Entry {
        name: "decomposed-then-ramified",
        origin: Origin::Reference,
        summary: "F2 diagonal in F2 x F2[z]/(z^2): four elements, psi bijective, not split at F2^2",
        spec: || ExtensionSpec::new("decomposed-then-ramified", prod(vec![z(2), dual(z(2))]), vec![]),
    },
    Entry {
        name: "z9-in-dual",
        origin: Origin::Derived,
        summary: "Z/9 in (Z/9)[z]/(z^2), crucial at (3)",
        spec: || ExtensionSpec::new("z9-in-dual", dual(z(9)), vec![]),
    },
    Entry {
        name: "f2^2-in-dual-x-f4",
        origin: Origin::Derived,
        summary: "F2^2 in F2[z]/(z^2) x F4: one ramified and one inert support",
        spec: || ExtensionSpec::new("f2^2-in-dual-x-f4", prod(vec![dual(z(2)), f(4)]), vec![json!([1, 0])]),
    },
    Entry {
        name: "f2xf4-in-f4^2",
        origin: Origin::Derived,
        summary: "F2 x F4 in F4^2, conductor 0 x F4",
        spec: || ExtensionSpec::new("f2xf4-in-f4^2", prod(vec![f(4), f(4)]), vec![json!([1, 0]), json!([0, [0, 1]])]),
    },
    Entry {
        name: "diagonal-f4^2",
        origin: Origin::Derived,
        summary: "F2 diagonal in F4^2",
        spec: || ExtensionSpec::new("diagonal-f4^2", prod(vec![f(4), f(4)]), vec![]),
    },
    Entry {
        name: "f2xf3-in-f4xf9",
        origin: Origin::Derived,
        summary: "Z/6 in F4 x F9: two inert supports",
        spec: || ExtensionSpec::new("f2xf3-in-f4xf9", prod(vec![f(4), f(9)]), vec![]),
    },
];

/// Names of the built-in finite extensions.
pub fn extension_names() -> Vec<&'static str> {
    EXTENSIONS.iter().map(|e| e.name).collect()
}

pub fn extension_spec(name: &str) -> Result<ExtensionSpec, FixtureError> {
    EXTENSIONS
        .iter()
        .find(|e| e.name == name)
        .map(|e| (e.spec)())
        .ok_or_else(|| FixtureError::Unknown(name.to_string()))
}

pub fn extension(name: &str, limits: Limits) -> Result<Extension, FixtureError> {
    extension_spec(name)?.build(limits)
}

/// Every built-in finite extension, built.
pub fn finite_extensions(limits: Limits) -> Result<Vec<Extension>, FixtureError> {
    EXTENSIONS.iter().map(|e| (e.spec)().build(limits)).collect()
}

const OTHERS: &[FixtureInfo] = &[
    FixtureInfo {
        name: "two-maxima-over-one-prime",
        class: FixtureClass::Poset,
        origin: Origin::Reference,
        summary: "Q < M1, Q < M2: five intermediate rings, not a B-extension",
    },
    FixtureInfo {
        name: "two-maxima-over-one-prime-lattice",
        class: FixtureClass::Labeled,
        origin: Origin::Reference,
        summary: "labelled lattice of the same support poset; no splitter at {M1}",
    },
    FixtureInfo {
        name: "quasi-prufer-not-split",
        class: FixtureClass::Labeled,
        origin: Origin::Reference,
        summary: "six elements, s-tallies 2 and 4, not split at the integral closure",
    },
    FixtureInfo {
        name: "inert-times-point",
        class: FixtureClass::Composite,
        origin: Origin::Derived,
        summary: "(F2 in F4) with a one-point Prufer component",
    },
    FixtureInfo {
        name: "boolean-times-chain",
        class: FixtureClass::Composite,
        origin: Origin::Derived,
        summary: "(F2^2 in F4^2) with a two-element chain Prufer component",
    },
    FixtureInfo {
        name: "inert-times-chain",
        class: FixtureClass::Composite,
        origin: Origin::Derived,
        summary: "(F2 in F4) with a height-one chain Prufer component",
    },
];

const POSET_FILES: &[(&str, &str)] =
    &[("two-maxima-over-one-prime", include_str!("../fixtures/two-maxima-over-one-prime.json"))];

const LABELED_FILES: &[(&str, &str)] = &[
    ("two-maxima-over-one-prime-lattice", include_str!("../fixtures/two-maxima-over-one-prime-lattice.json")),
    ("quasi-prufer-not-split", include_str!("../fixtures/quasi-prufer-not-split.json")),
];

fn lookup<'a>(table: &[(&str, &'a str)], name: &str) -> Result<&'a str, FixtureError> {
    table.iter().find(|(n, _)| *n == name).map(|(_, t)| *t).ok_or_else(|| FixtureError::Unknown(name.to_string()))
}

/// The JSON source of a built-in poset or labelled lattice.
pub fn fixture_text(name: &str) -> Result<&'static str, FixtureError> {
    lookup(POSET_FILES, name).or_else(|_| lookup(LABELED_FILES, name))
}

pub fn poset(name: &str) -> Result<SupportPoset, FixtureError> {
    Ok(SupportPoset::parse(lookup(POSET_FILES, name)?).expect("built-in posets are valid"))
}

pub fn labeled(name: &str) -> Result<LabeledLattice, FixtureError> {
    Ok(LabeledLattice::parse(lookup(LABELED_FILES, name)?).expect("built-in lattices are valid"))
}

/// Built-in composites: an integral fixture times a Prüfer poset.
pub fn composite_spec(name: &str) -> Result<CompositeSpec, FixtureError> {
    let (ext, poset) = match name {
        "inert-times-point" => ("f2-in-f4", SupportPoset::antichain(1)),
        "boolean-times-chain" => ("f2^2-in-f4^2", SupportPoset::chain(2)),
        "inert-times-chain" => ("f2-in-f4", SupportPoset::chain(2)),
        _ => return Err(FixtureError::Unknown(name.to_string())),
    };
    Ok(CompositeSpec {
        name: name.to_string(),
        components: vec![
            ComponentSpec::Integral { label: "f".into(), extension: extension_spec(ext)? },
            ComponentSpec::Prufer { label: "p".into(), poset: poset.to_spec() },
        ],
    })
}

pub fn composite(name: &str, limits: Limits) -> Result<Composite, FixtureError> {
    Ok(composite_spec(name)?.build(limits).expect("built-in composites are valid"))
}

pub fn composite_names() -> Vec<&'static str> {
    OTHERS.iter().filter(|f| f.class == FixtureClass::Composite).map(|f| f.name).collect()
}

/// The whole catalogue, extensions first.
pub fn catalogue() -> Vec<FixtureInfo> {
    EXTENSIONS
        .iter()
        .map(|e| FixtureInfo { name: e.name, class: FixtureClass::Extension, origin: e.origin, summary: e.summary })
        .chain(OTHERS.iter().cloned())
        .collect()
}
