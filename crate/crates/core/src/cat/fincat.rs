use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits::Limits;

pub type Obj = usize;
pub type Mor = usize;

const UNDEF: u32 = u32::MAX;

/// Composition rule for categories built by formula (products, Grothendieck
/// constructions). Called only on composable pairs.
pub type ComposeRule = Arc<dyn Fn(Mor, Mor) -> Mor + Send + Sync>;

#[derive(Clone)]
enum Composer {
    Table(Vec<u32>),
    Rule(ComposeRule),
}

/// A generating set of morphisms together with a word for every morphism:
/// `word[m] = Some((s, rest))` means `m = s ∘ rest` with `s` a generator.
#[derive(Debug, Clone)]
pub struct Generators {
    pub gens: Vec<Mor>,
    pub word: Vec<Option<(Mor, Mor)>>,
    /// Morphisms in the order they were reached; every `rest` precedes its word.
    pub order: Vec<Mor>,
}

/// A finite category with explicit object and morphism identifiers.
///
/// Objects and morphisms are addressed by dense indices. Composition is total on
/// composable pairs, either tabulated or given by a rule for large constructed
/// categories.
#[derive(Clone)]
pub struct FinCat {
    objects: Vec<String>,
    morphisms: Vec<String>,
    src: Vec<Obj>,
    tgt: Vec<Obj>,
    identity: Vec<Mor>,
    hom: Vec<Vec<Mor>>,
    into: Vec<Vec<Mor>>,
    from: Vec<Vec<Mor>>,
    composer: Composer,
    obj_index: HashMap<String, Obj>,
    mor_index: HashMap<String, Mor>,
    inverse: OnceLock<Vec<Option<Mor>>>,
    generators: OnceLock<Generators>,
}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FinCat({} objects, {} morphisms)",
            self.objects.len(),
            self.morphisms.len()
        )
    }
}

/// Serialized presentation of a finite category. Composites involving an
/// identity are implied and must not be listed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub identities: BTreeMap<String, String>,
    #[serde(default)]
    pub compose: Vec<[String; 3]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMorphism {
    pub name: String,
    pub src: String,
    pub tgt: String,
}

fn index_names(names: &[String]) -> Result<HashMap<String, usize>> {
    let mut idx = HashMap::with_capacity(names.len());
    for (i, n) in names.iter().enumerate() {
        if idx.insert(n.clone(), i).is_some() {
            return Err(Error::DuplicateId(n.clone()));
        }
    }
    Ok(idx)
}

impl FinCat {
    fn assemble(
        objects: Vec<String>,
        morphisms: Vec<String>,
        src: Vec<Obj>,
        tgt: Vec<Obj>,
        identity: Vec<Mor>,
        composer: Composer,
    ) -> Result<FinCat> {
        let n = objects.len();
        let obj_index = index_names(&objects)?;
        let mor_index = index_names(&morphisms)?;
        let mut hom = vec![Vec::new(); n * n];
        let mut into = vec![Vec::new(); n];
        let mut from = vec![Vec::new(); n];
        for m in 0..morphisms.len() {
            hom[src[m] * n + tgt[m]].push(m);
            into[tgt[m]].push(m);
            from[src[m]].push(m);
        }
        Ok(FinCat {
            objects,
            morphisms,
            src,
            tgt,
            identity,
            hom,
            into,
            from,
            composer,
            obj_index,
            mor_index,
            inverse: OnceLock::new(),
            generators: OnceLock::new(),
        })
    }

    /// Builds a category from a tabulated composition `table[g * m + f] = g ∘ f`
    /// without checking the axioms. Callers that cannot vouch for the table must
    /// follow up with [`FinCat::check_axioms`].
    pub fn from_table_unchecked(
        objects: Vec<String>,
        morphisms: Vec<(String, Obj, Obj)>,
        identity: Vec<Mor>,
        table: Vec<u32>,
    ) -> Result<FinCat> {
        let (names, src, tgt) = split_morphisms(morphisms);
        Self::assemble(objects, names, src, tgt, identity, Composer::Table(table))
    }

    /// Builds a category whose composition is computed by `rule`.
    pub fn from_rule(
        objects: Vec<String>,
        morphisms: Vec<(String, Obj, Obj)>,
        identity: Vec<Mor>,
        rule: ComposeRule,
    ) -> Result<FinCat> {
        let (names, src, tgt) = split_morphisms(morphisms);
        Self::assemble(objects, names, src, tgt, identity, Composer::Rule(rule))
    }

    /// Builds a category from a composition function, tabulating it eagerly.
    pub fn from_fn<F>(
        objects: Vec<String>,
        morphisms: Vec<(String, Obj, Obj)>,
        identity: Vec<Mor>,
        compose: F,
    ) -> Result<FinCat>
    where
        F: Fn(Mor, Mor) -> Mor,
    {
        let m = morphisms.len();
        let mut table = vec![UNDEF; m * m];
        for g in 0..m {
            for f in 0..m {
                if morphisms[f].2 == morphisms[g].1 {
                    table[g * m + f] = compose(g, f) as u32;
                }
            }
        }
        Self::from_table_unchecked(objects, morphisms, identity, table)
    }

    /// Validates a raw presentation: identifiers are sorted so that index order
    /// is identifier order, then identity, closure and associativity are checked.
    pub fn from_raw(raw: &RawCategory, limits: &Limits) -> Result<FinCat> {
        let mut objects = raw.objects.clone();
        objects.sort();
        let obj_index = index_names(&objects)?;
        let mut mors: Vec<&RawMorphism> = raw.morphisms.iter().collect();
        mors.sort_by(|a, b| a.name.cmp(&b.name));
        let names: Vec<String> = mors.iter().map(|m| m.name.clone()).collect();
        let mor_index = index_names(&names)?;
        let lookup_obj = |s: &str| {
            obj_index
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnknownId(s.to_string()))
        };
        let lookup_mor = |s: &str| {
            mor_index
                .get(s)
                .copied()
                .ok_or_else(|| Error::UnknownId(s.to_string()))
        };
        let mut morphisms = Vec::with_capacity(mors.len());
        for m in &mors {
            morphisms.push((m.name.clone(), lookup_obj(&m.src)?, lookup_obj(&m.tgt)?));
        }
        for k in raw.identities.keys() {
            lookup_obj(k)?;
        }
        let mut identity = Vec::with_capacity(objects.len());
        for (o, name) in objects.iter().enumerate() {
            let id_name = raw
                .identities
                .get(name)
                .ok_or_else(|| Error::MissingIdentity(name.clone()))?;
            let id = lookup_mor(id_name)?;
            if morphisms[id].1 != o || morphisms[id].2 != o {
                return Err(Error::IdentityLaw(id_name.clone()));
            }
            if identity.contains(&id) {
                return Err(Error::IdentityLaw(id_name.clone()));
            }
            identity.push(id);
        }
        let m = morphisms.len();
        let mut table = vec![UNDEF; m * m];
        let is_id: Vec<bool> = (0..m).map(|f| identity.contains(&f)).collect();
        for f in 0..m {
            for g in 0..m {
                if morphisms[f].2 != morphisms[g].1 {
                    continue;
                }
                if is_id[g] {
                    table[g * m + f] = f as u32;
                } else if is_id[f] {
                    table[g * m + f] = g as u32;
                }
            }
        }
        for [g, f, h] in &raw.compose {
            let (gi, fi, hi) = (lookup_mor(g)?, lookup_mor(f)?, lookup_mor(h)?);
            if morphisms[fi].2 != morphisms[gi].1 || is_id[gi] || is_id[fi] {
                return Err(Error::NotComposable {
                    g: g.clone(),
                    f: f.clone(),
                });
            }
            if morphisms[hi].1 != morphisms[fi].1 || morphisms[hi].2 != morphisms[gi].2 {
                return Err(Error::CompositeEndpoints {
                    g: g.clone(),
                    f: f.clone(),
                    h: h.clone(),
                });
            }
            let slot = &mut table[gi * m + fi];
            if *slot != UNDEF && *slot != hi as u32 {
                return Err(Error::DuplicateId(format!("{g} ∘ {f}")));
            }
            *slot = hi as u32;
        }
        for f in 0..m {
            for g in 0..m {
                if morphisms[f].2 == morphisms[g].1 && table[g * m + f] == UNDEF {
                    return Err(Error::CompositeUndefined {
                        g: morphisms[g].0.clone(),
                        f: morphisms[f].0.clone(),
                    });
                }
            }
        }
        let cat = Self::from_table_unchecked(objects, morphisms, identity, table)?;
        cat.check_axioms(limits)?;
        Ok(cat)
    }

    pub fn to_raw(&self) -> RawCategory {
        let mut compose = Vec::new();
        let is_id: Vec<bool> = (0..self.num_morphisms())
            .map(|f| self.is_identity(f))
            .collect();
        for f in 0..self.num_morphisms() {
            if is_id[f] {
                continue;
            }
            for &g in &self.from[self.tgt[f]] {
                if !is_id[g] {
                    compose.push([
                        self.morphisms[g].clone(),
                        self.morphisms[f].clone(),
                        self.morphisms[self.compose(g, f)].clone(),
                    ]);
                }
            }
        }
        RawCategory {
            objects: self.objects.clone(),
            morphisms: (0..self.num_morphisms())
                .map(|m| RawMorphism {
                    name: self.morphisms[m].clone(),
                    src: self.objects[self.src[m]].clone(),
                    tgt: self.objects[self.tgt[m]].clone(),
                })
                .collect(),
            identities: (0..self.num_objects())
                .map(|o| {
                    (
                        self.objects[o].clone(),
                        self.morphisms[self.identity[o]].clone(),
                    )
                })
                .collect(),
            compose,
        }
    }

    /// Exhaustive check of the unit and associativity laws.
    pub fn check_axioms(&self, limits: &Limits) -> Result<()> {
        let n = self.num_objects();
        for o in 0..n {
            let id = self.identity[o];
            if self.src[id] != o || self.tgt[id] != o {
                return Err(Error::IdentityLaw(self.morphisms[id].clone()));
            }
        }
        for f in 0..self.num_morphisms() {
            if self.compose(self.identity[self.tgt[f]], f) != f
                || self.compose(f, self.identity[self.src[f]]) != f
            {
                return Err(Error::IdentityLaw(self.morphisms[f].clone()));
            }
        }
        let mut triples: u128 = 0;
        for b in 0..n {
            for c in 0..n {
                triples += (self.into[b].len() * self.hom(b, c).len() * self.from[c].len()) as u128;
            }
        }
        limits.admit(triples)?;
        for f in 0..self.num_morphisms() {
            for &g in &self.from[self.tgt[f]] {
                let gf = self.compose(g, f);
                if self.src[gf] != self.src[f] || self.tgt[gf] != self.tgt[g] {
                    return Err(Error::CompositeEndpoints {
                        g: self.morphisms[g].clone(),
                        f: self.morphisms[f].clone(),
                        h: self.morphisms[gf].clone(),
                    });
                }
                for &h in &self.from[self.tgt[g]] {
                    if self.compose(self.compose(h, g), f) != self.compose(h, gf) {
                        return Err(Error::Associativity {
                            h: self.morphisms[h].clone(),
                            g: self.morphisms[g].clone(),
                            f: self.morphisms[f].clone(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }
    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }
    pub fn objects(&self) -> std::ops::Range<Obj> {
        0..self.objects.len()
    }
    pub fn morphisms(&self) -> std::ops::Range<Mor> {
        0..self.morphisms.len()
    }
    pub fn object_name(&self, o: Obj) -> &str {
        &self.objects[o]
    }
    pub fn morphism_name(&self, m: Mor) -> &str {
        &self.morphisms[m]
    }
    pub fn object_names(&self) -> &[String] {
        &self.objects
    }
    pub fn morphism_names(&self) -> &[String] {
        &self.morphisms
    }
    pub fn object_by_name(&self, name: &str) -> Result<Obj> {
        self.obj_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownId(name.to_string()))
    }
    pub fn morphism_by_name(&self, name: &str) -> Result<Mor> {
        self.mor_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownId(name.to_string()))
    }
    pub fn src(&self, m: Mor) -> Obj {
        self.src[m]
    }
    pub fn tgt(&self, m: Mor) -> Obj {
        self.tgt[m]
    }
    pub fn identity(&self, o: Obj) -> Mor {
        self.identity[o]
    }
    pub fn is_identity(&self, m: Mor) -> bool {
        self.src[m] == self.tgt[m] && self.identity[self.src[m]] == m
    }
    /// Morphisms `a → b`, in index order.
    pub fn hom(&self, a: Obj, b: Obj) -> &[Mor] {
        &self.hom[a * self.objects.len() + b]
    }
    /// Morphisms with target `o`.
    pub fn morphisms_into(&self, o: Obj) -> &[Mor] {
        &self.into[o]
    }
    /// Morphisms with source `o`.
    pub fn morphisms_from(&self, o: Obj) -> &[Mor] {
        &self.from[o]
    }

    /// `g ∘ f`. Panics on a non-composable pair.
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        assert_eq!(
            self.tgt[f], self.src[g],
            "composing non-composable pair {} ∘ {}",
            self.morphisms[g], self.morphisms[f]
        );
        match &self.composer {
            Composer::Table(t) => t[g * self.morphisms.len() + f] as usize,
            Composer::Rule(r) => r(g, f),
        }
    }

    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        (self.tgt[f] == self.src[g]).then(|| self.compose(g, f))
    }

    fn inverse_table(&self) -> &Vec<Option<Mor>> {
        self.inverse.get_or_init(|| {
            let mut inv = vec![None; self.num_morphisms()];
            for f in self.morphisms() {
                if inv[f].is_some() {
                    continue;
                }
                let (a, b) = (self.src[f], self.tgt[f]);
                for &g in self.hom(b, a) {
                    if self.compose(g, f) == self.identity[a]
                        && self.compose(f, g) == self.identity[b]
                    {
                        inv[f] = Some(g);
                        inv[g] = Some(f);
                        break;
                    }
                }
            }
            inv
        })
    }

    pub fn inverse(&self, f: Mor) -> Option<Mor> {
        self.inverse_table()[f]
    }

    pub fn is_iso(&self, f: Mor) -> bool {
        self.inverse(f).is_some()
    }

    pub fn is_groupoid(&self) -> bool {
        self.inverse_table().iter().all(Option::is_some)
    }

    /// Fails with the first non-invertible morphism.
    pub fn require_groupoid(&self) -> Result<()> {
        match self.inverse_table().iter().position(Option::is_none) {
            None => Ok(()),
            Some(m) => Err(Error::NotInvertible(self.morphisms[m].clone())),
        }
    }

    pub fn is_discrete(&self) -> bool {
        self.morphisms().all(|m| self.is_identity(m))
    }

    /// Objects isomorphic to `a`, with a chosen isomorphism `a → b` each.
    pub fn isomorphic_objects(&self, a: Obj) -> Vec<(Obj, Mor)> {
        self.objects()
            .filter_map(|b| {
                self.hom(a, b)
                    .iter()
                    .find(|&&m| self.is_iso(m))
                    .map(|&m| (b, m))
            })
            .collect()
    }

    pub fn generators(&self) -> &Generators {
        self.generators.get_or_init(|| compute_generators(self))
    }

    /// Checks that two categories have the same identifiers and composition.
    pub fn structurally_eq(&self, other: &FinCat) -> bool {
        if self.objects != other.objects
            || self.morphisms != other.morphisms
            || self.src != other.src
            || self.tgt != other.tgt
            || self.identity != other.identity
        {
            return false;
        }
        self.morphisms().all(|f| {
            self.from[self.tgt[f]]
                .iter()
                .all(|&g| self.compose(g, f) == other.compose(g, f))
        })
    }
}

fn split_morphisms(morphisms: Vec<(String, Obj, Obj)>) -> (Vec<String>, Vec<Obj>, Vec<Obj>) {
    let mut names = Vec::with_capacity(morphisms.len());
    let mut src = Vec::with_capacity(morphisms.len());
    let mut tgt = Vec::with_capacity(morphisms.len());
    for (n, s, t) in morphisms {
        names.push(n);
        src.push(s);
        tgt.push(t);
    }
    (names, src, tgt)
}

/// Greedy generating set: a morphism becomes a generator when it is not yet a
/// composite of earlier generators. Words are built by left multiplication.
fn compute_generators(cat: &FinCat) -> Generators {
    let m = cat.num_morphisms();
    let mut word: Vec<Option<(Mor, Mor)>> = vec![None; m];
    let mut reached = vec![false; m];
    let mut order = Vec::with_capacity(m);
    let mut reached_into: Vec<Vec<Mor>> = vec![Vec::new(); cat.num_objects()];
    let mut gens_from: Vec<Vec<Mor>> = vec![Vec::new(); cat.num_objects()];
    for o in cat.objects() {
        let id = cat.identity(o);
        reached[id] = true;
        order.push(id);
        reached_into[o].push(id);
    }
    let mut gens = Vec::new();
    for cand in 0..m {
        if reached[cand] {
            continue;
        }
        gens.push(cand);
        gens_from[cat.src(cand)].push(cand);
        let mut queue = VecDeque::new();
        let base: Vec<Mor> = reached_into[cat.src(cand)].clone();
        for w in base {
            let c = cat.compose(cand, w);
            if !reached[c] {
                reached[c] = true;
                word[c] = Some((cand, w));
                order.push(c);
                reached_into[cat.tgt(c)].push(c);
                queue.push_back(c);
            }
        }
        while let Some(e) = queue.pop_front() {
            for &s in &gens_from[cat.tgt(e)] {
                let c = cat.compose(s, e);
                if !reached[c] {
                    reached[c] = true;
                    word[c] = Some((s, e));
                    order.push(c);
                    reached_into[cat.tgt(c)].push(c);
                    queue.push_back(c);
                }
            }
        }
    }
    Generators { gens, word, order }
}
