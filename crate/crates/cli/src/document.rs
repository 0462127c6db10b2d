//! The input document schema. Every section is optional; each command states
//! which sections it reads.

use std::collections::BTreeMap;
use std::fmt;

use descent_core::cat::RawCategory;
use num_bigint::BigInt;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CliError, CliResult};

/// An unbounded integer: a JSON number when it fits in 64 bits, otherwise a
/// decimal string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(&self.0) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        struct IntVisitor;
        impl Visitor<'_> for IntVisitor {
            type Value = Int;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
                Ok(Int(v.into()))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
                v.trim()
                    .parse()
                    .map(Int)
                    .map_err(|_| E::custom(format!("`{v}` is not an integer")))
            }
        }
        d.deserialize_any(IntVisitor)
    }
}

pub type RawMatrix = Vec<Vec<Int>>;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub category: Option<CategorySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub site: Option<SiteSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presheaf_set: Option<PresheafSetSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub presheaf_grpd: Option<PresheafGrpdSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<MapSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groupoid_object: Option<GroupoidObjectSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub descent_datum: Option<DescentDatumSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hopf_algebroid: Option<HopfSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comodule: Option<ComoduleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module_map: Option<ModuleMapSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abelian_presheaf: Option<AbelianPresheafSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring_map: Option<RingMapSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleSection>,
}

/// An explicit presentation, or a poset or finite-set shorthand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CategorySection {
    Poset { poset: PosetSpec },
    FiniteSets { finite_sets: Vec<NamedSize> },
    Explicit(RawCategory),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetSpec {
    pub elements: Vec<String>,
    /// Generating relations `[a, b]` meaning `a ≤ b`.
    pub leq: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedSize {
    pub name: String,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteSection {
    pub covers: Vec<CoverSpec>,
    /// Chosen pullbacks; computed by search when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pullbacks: Option<Vec<PullbackSpec>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSpec {
    pub target: String,
    pub legs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PullbackSpec {
    pub f: String,
    pub g: String,
    pub apex: String,
    pub p1: String,
    pub p2: String,
}

/// Element labels per object and, per non-identity morphism `m: a → b`, the
/// label in `F(a)` of the restriction of each element of `F(b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafSetSection {
    pub values: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub restrict: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PresheafGrpdSection {
    Constant(ConstantGrpd),
    Explicit(ExplicitGrpd),
}

/// The constant presheaf with value `group`, one-point at `terminal_at`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantGrpd {
    pub constant: CategorySection,
    #[serde(default)]
    pub terminal_at: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitGrpd {
    pub values: BTreeMap<String, CategorySection>,
    /// Restriction functors per non-identity morphism.
    #[serde(default)]
    pub restrict: BTreeMap<String, FunctorSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctorSpec {
    pub objects: BTreeMap<String, String>,
    pub morphisms: BTreeMap<String, String>,
}

/// A map of presheaves of groupoids: the Čech map of a basis cover, the map
/// from `presheaf_grpd` to the terminal presheaf, or explicit components from
/// `presheaf_grpd` to `target`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MapSection {
    Cech { cech_cover: usize },
    ToTerminal { to_terminal: bool },
    Explicit(ExplicitMap),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitMap {
    pub target: PresheafGrpdSection,
    pub components: BTreeMap<String, FunctorSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidObjectSection {
    pub x0: String,
    pub x1: String,
    pub d: String,
    pub r: String,
    pub i: String,
    pub mu: String,
    pub inv: String,
}

/// `F0` on the slice over `X0` and the gluing bijections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DescentDatumSection {
    pub f0: PresheafSetSection,
    pub alpha: Vec<GluingSpec>,
}

/// `α_u` for `u` an object of `M(Y)`'s morphisms, as the target label of
/// each source element in order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluingSpec {
    pub object: String,
    pub arrow: String,
    pub table: Vec<String>,
}

/// `base` is `Z` or `Z/n`; `relations` has one row per generator and one
/// column per relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub base: String,
    pub generators: usize,
    #[serde(default)]
    pub relations: RawMatrix,
}

/// `table[i][j]` is the product of generators `i` and `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub module: ModuleSpec,
    pub unit: Vec<Int>,
    pub table: Vec<Vec<Vec<Int>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfSection {
    pub a: AlgebraSpec,
    pub gamma: AlgebraSpec,
    pub eta_l: RawMatrix,
    pub eta_r: RawMatrix,
    pub counit: RawMatrix,
    pub delta: RawMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub conjugation: Option<RawMatrix>,
}

/// A module over an algebra: one action matrix per algebra generator. With
/// no action the algebra must be its base ring.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSection {
    pub module: ModuleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<RawMatrix>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComoduleSection {
    pub module: ModuleSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<Vec<RawMatrix>>,
    /// `M → M ⊗_A Γ` with generator `(j, i)` at `j·|Γ| + i`.
    pub coaction: RawMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleMapSection {
    pub domain: ComoduleSection,
    pub codomain: ComoduleSection,
    pub matrix: RawMatrix,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AbelianPresheafSection {
    Constant { constant: ModuleSpec },
    Explicit(ExplicitAbelian),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitAbelian {
    pub values: BTreeMap<String, ModuleSpec>,
    /// Restriction matrices per non-identity morphism `a → b`, from the
    /// value at `b` to the value at `a`.
    #[serde(default)]
    pub restrict: BTreeMap<String, RawMatrix>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingMapSection {
    pub domain: AlgebraSpec,
    pub codomain: AlgebraSpec,
    pub matrix: RawMatrix,
}

impl Document {
    pub fn parse(text: &str) -> CliResult<Document> {
        let mut de = serde_json::Deserializer::from_str(text);
        let doc = serde_path_to_error::deserialize(&mut de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let (line, column) = (inner.line(), inner.column());
            let text = inner.to_string();
            let text = text
                .strip_suffix(&format!(" at line {line} column {column}"))
                .unwrap_or(&text);
            CliError::Parse {
                line,
                column,
                message: if path == "." {
                    text.to_string()
                } else {
                    format!("at `{path}`: {text}")
                },
            }
        })?;
        de.end()?;
        Ok(doc)
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}
