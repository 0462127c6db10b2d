//! Set-valued presheaves on finite categories.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::cat::{same_cat, FinCat, Functor, Mor, Obj};
use crate::error::{Error, Result};
use crate::limits::{Budget, Limits};
use crate::search::for_each_assignment;

/// A strict contravariant functor to finite sets. Elements of `F(X)` are
/// `0..size(X)` with display labels; `restriction(m)` maps `F(tgt m) → F(src m)`.
#[derive(Debug, Clone)]
pub struct PshSet {
    cat: Arc<FinCat>,
    labels: Vec<Vec<String>>,
    restrict: Vec<Vec<usize>>,
}

impl PartialEq for PshSet {
    fn eq(&self, other: &Self) -> bool {
        same_cat(&self.cat, &other.cat)
            && self.labels == other.labels
            && self.restrict == other.restrict
    }
}

impl Eq for PshSet {}

fn numeric_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl PshSet {
    pub fn new(
        cat: Arc<FinCat>,
        labels: Vec<Vec<String>>,
        restrict: Vec<Vec<usize>>,
    ) -> Result<PshSet> {
        let f = PshSet {
            cat,
            labels,
            restrict,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn new_unchecked(
        cat: Arc<FinCat>,
        labels: Vec<Vec<String>>,
        restrict: Vec<Vec<usize>>,
    ) -> PshSet {
        PshSet {
            cat,
            labels,
            restrict,
        }
    }

    /// Presheaf with numeric labels given sizes and restriction tables.
    pub fn from_tables(
        cat: Arc<FinCat>,
        sizes: &[usize],
        restrict: Vec<Vec<usize>>,
    ) -> Result<PshSet> {
        PshSet::new(
            cat,
            sizes.iter().map(|&n| numeric_labels(n)).collect(),
            restrict,
        )
    }

    /// Builds a presheaf from a restriction rule, validating the result.
    pub fn from_fn<F>(cat: Arc<FinCat>, sizes: &[usize], rule: F) -> Result<PshSet>
    where
        F: Fn(Mor, usize) -> usize,
    {
        let restrict = cat
            .morphisms()
            .map(|m| (0..sizes[cat.tgt(m)]).map(|x| rule(m, x)).collect())
            .collect();
        PshSet::from_tables(cat, sizes, restrict)
    }

    pub fn terminal(cat: Arc<FinCat>) -> PshSet {
        let sizes = vec![1; cat.num_objects()];
        PshSet::from_fn(cat, &sizes, |_, _| 0).expect("terminal presheaf is valid")
    }

    pub fn empty(cat: Arc<FinCat>) -> PshSet {
        let sizes = vec![0; cat.num_objects()];
        PshSet::from_fn(cat, &sizes, |_, _| 0).expect("empty presheaf is valid")
    }

    /// `Hom(−, x)`, with elements labelled by morphism names.
    pub fn representable(cat: Arc<FinCat>, x: Obj) -> PshSet {
        let labels = cat
            .objects()
            .map(|y| {
                cat.hom(y, x)
                    .iter()
                    .map(|&m| cat.morphism_name(m).to_string())
                    .collect()
            })
            .collect();
        let restrict = cat
            .morphisms()
            .map(|m| {
                let (y, z) = (cat.src(m), cat.tgt(m));
                let into_y = cat.hom(y, x);
                cat.hom(z, x)
                    .iter()
                    .map(|&g| {
                        let gm = cat.compose(g, m);
                        into_y
                            .iter()
                            .position(|&e| e == gm)
                            .expect("composite lies in the hom-set")
                    })
                    .collect()
            })
            .collect();
        PshSet {
            cat,
            labels,
            restrict,
        }
    }

    pub fn cat(&self) -> &Arc<FinCat> {
        &self.cat
    }

    pub fn size(&self, x: Obj) -> usize {
        self.labels[x].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn labels(&self, x: Obj) -> &[String] {
        &self.labels[x]
    }

    pub fn label(&self, x: Obj, e: usize) -> &str {
        &self.labels[x][e]
    }

    /// `F(m): F(tgt m) → F(src m)`.
    pub fn restriction(&self, m: Mor) -> &[usize] {
        &self.restrict[m]
    }

    pub fn restrict(&self, m: Mor, e: usize) -> usize {
        self.restrict[m][e]
    }

    pub fn restriction_tables(&self) -> &[Vec<usize>] {
        &self.restrict
    }

    /// Table shapes, identities, and `F(s ∘ f) = F(f) ∘ F(s)` for generators `s`
    /// (which implies contravariance on all composable pairs).
    pub fn validate(&self) -> Result<()> {
        let c = &*self.cat;
        let bad = |msg: String| Err(Error::InvalidPresheaf(msg));
        if self.labels.len() != c.num_objects() || self.restrict.len() != c.num_morphisms() {
            return bad("table sizes do not match the category".into());
        }
        for m in c.morphisms() {
            let (s, t) = (self.size(c.src(m)), self.size(c.tgt(m)));
            if self.restrict[m].len() != t || self.restrict[m].iter().any(|&e| e >= s) {
                return bad(format!(
                    "restriction along `{}` is not a function",
                    c.morphism_name(m)
                ));
            }
        }
        for x in c.objects() {
            let id = &self.restrict[c.identity(x)];
            if id.iter().enumerate().any(|(i, &e)| i != e) {
                return bad(format!(
                    "identity of `{}` does not act as the identity",
                    c.object_name(x)
                ));
            }
        }
        for &s in &c.generators().gens {
            for &f in c.morphisms_into(c.src(s)) {
                let sf = c.compose(s, f);
                let ok = (0..self.size(c.tgt(s)))
                    .all(|e| self.restrict[sf][e] == self.restrict[f][self.restrict[s][e]]);
                if !ok {
                    return bad(format!(
                        "restriction along `{} ∘ {}` is not the composite of restrictions",
                        c.morphism_name(s),
                        c.morphism_name(f)
                    ));
                }
            }
        }
        Ok(())
    }

    /// `F ∘ p` for a functor `p: D → C`.
    pub fn pull_back_along(&self, p: &Functor) -> Result<PshSet> {
        if !same_cat(p.cod(), &self.cat) {
            return Err(Error::InvalidPresheaf(
                "functor codomain is not the presheaf's category".into(),
            ));
        }
        let d = p.dom();
        let labels = d.objects().map(|y| self.labels[p.obj(y)].clone()).collect();
        let restrict = d
            .morphisms()
            .map(|m| self.restrict[p.mor(m)].clone())
            .collect();
        Ok(PshSet {
            cat: d.clone(),
            labels,
            restrict,
        })
    }

    /// All presheaves with the given value sizes, in a deterministic order.
    pub fn enumerate_with_sizes(
        cat: &Arc<FinCat>,
        sizes: &[usize],
        limits: &Limits,
    ) -> Result<Vec<PshSet>> {
        let mut out = Vec::new();
        let mut budget = limits.budget();
        let rels = Relations::new(cat);
        let mut builder = Builder::new(cat, &rels, sizes);
        builder.run(
            &mut budget,
            None::<&mut rand_chacha::ChaCha8Rng>,
            &mut |f| {
                out.push(f);
                true
            },
        )?;
        Ok(out)
    }

    /// All presheaves with every value of size at most `bound`.
    pub fn enumerate_bounded(
        cat: &Arc<FinCat>,
        bound: usize,
        limits: &Limits,
    ) -> Result<Vec<PshSet>> {
        let mut out = Vec::new();
        let n = cat.num_objects();
        let size_choices: Vec<Vec<usize>> = vec![(0..=bound).collect(); n];
        let mut budget = limits.budget();
        let mut size_vectors = Vec::new();
        for_each_assignment(
            &size_choices,
            &mut budget,
            &mut |_, _| true,
            &mut |v: &[usize]| {
                size_vectors.push(v.to_vec());
                true
            },
        )?;
        let rels = Relations::new(cat);
        for sizes in size_vectors {
            let mut builder = Builder::new(cat, &rels, &sizes);
            builder.run(
                &mut budget,
                None::<&mut rand_chacha::ChaCha8Rng>,
                &mut |f| {
                    out.push(f);
                    true
                },
            )?;
        }
        Ok(out)
    }

    /// A presheaf with the given sizes chosen by randomized search, if one exists
    /// within the budget.
    pub fn random_with_sizes<R: Rng>(
        cat: &Arc<FinCat>,
        sizes: &[usize],
        rng: &mut R,
        limits: &Limits,
    ) -> Result<Option<PshSet>> {
        let mut found = None;
        let mut budget = limits.budget();
        let rels = Relations::new(cat);
        let mut builder = Builder::new(cat, &rels, sizes);
        builder.run(&mut budget, Some(rng), &mut |f| {
            found = Some(f);
            false
        })?;
        Ok(found)
    }

    /// A random presheaf with values of size at most `bound`.
    pub fn random_bounded<R: Rng>(
        cat: &Arc<FinCat>,
        bound: usize,
        rng: &mut R,
        limits: &Limits,
    ) -> Result<PshSet> {
        loop {
            let sizes: Vec<usize> = cat.objects().map(|_| rng.gen_range(0..=bound)).collect();
            if let Some(f) = PshSet::random_with_sizes(cat, &sizes, rng, limits)? {
                return Ok(f);
            }
        }
    }

    /// All natural transformations `self → other`, as component tables.
    pub fn homs(&self, other: &PshSet, limits: &Limits) -> Result<Vec<PshMap>> {
        PshMap::enumerate(self, other, limits)
    }
}

/// Composites with generators, tabulated once per category.
struct Relations {
    gens: Vec<Mor>,
    /// `left[x]`: `(k, gens[k] ∘ x)` for every generator composable after `x`
    left: Vec<Vec<(usize, Mor)>>,
    /// `right[k]`: `(m, gens[k] ∘ m)` for every non-identity `m` before `gens[k]`
    right: Vec<Vec<(Mor, Mor)>>,
    /// `deps[x]`: generators whose candidate filter reads `F(x)`
    deps: Vec<Vec<usize>>,
}

impl Relations {
    fn new(c: &FinCat) -> Relations {
        let gens = c.generators().gens.clone();
        let mut left = vec![Vec::new(); c.num_morphisms()];
        let mut right = Vec::with_capacity(gens.len());
        for (k, &s) in gens.iter().enumerate() {
            let mut r = Vec::new();
            for &m in c.morphisms_into(c.src(s)) {
                let sm = c.compose(s, m);
                left[m].push((k, sm));
                if !c.is_identity(m) {
                    r.push((m, sm));
                }
            }
            right.push(r);
        }
        let mut deps = vec![Vec::new(); c.num_morphisms()];
        for (k, &s) in gens.iter().enumerate() {
            deps[s].push(k);
            for &(m, sm) in &right[k] {
                deps[m].push(k);
                deps[sm].push(k);
            }
            for &(j, ts) in &left[s] {
                deps[gens[j]].push(k);
                deps[ts].push(k);
            }
        }
        for d in &mut deps {
            d.sort_unstable();
            d.dedup();
        }
        Relations {
            gens,
            left,
            right,
            deps,
        }
    }
}

/// Backtracking over restriction tables of generators, most constrained
/// generator first. Each assignment is closed under composition with the
/// assigned generators, so a relation is checked as soon as both of its
/// sides are determined.
struct Builder<'a> {
    cat: &'a Arc<FinCat>,
    rels: &'a Relations,
    sizes: Vec<usize>,
}

impl<'a> Builder<'a> {
    fn new(cat: &'a Arc<FinCat>, rels: &'a Relations, sizes: &[usize]) -> Builder<'a> {
        Builder {
            cat,
            rels,
            sizes: sizes.to_vec(),
        }
    }

    fn run<R: Rng>(
        &mut self,
        budget: &mut Budget,
        rng: Option<&mut R>,
        visit: &mut dyn FnMut(PshSet) -> bool,
    ) -> Result<()> {
        let c = &**self.cat;
        // domains: all functions F(tgt s) → F(src s)
        let mut domains: Vec<Vec<Vec<usize>>> = self
            .rels
            .gens
            .iter()
            .map(|&s| all_functions(self.sizes[c.tgt(s)], self.sizes[c.src(s)]))
            .collect();
        if let Some(r) = rng {
            for d in &mut domains {
                d.shuffle(r);
            }
        }
        let mut state = Search {
            rels: self.rels,
            domains: &domains,
            assigned: vec![false; self.rels.gens.len()],
            tables: c
                .morphisms()
                .map(|m| {
                    c.is_identity(m)
                        .then(|| (0..self.sizes[c.tgt(m)]).collect())
                })
                .collect(),
        };
        let sizes = &self.sizes;
        let cat = self.cat;
        state.go(
            &mut vec![None; self.rels.gens.len()],
            budget,
            &mut |tables| {
                let restrict = tables
                    .iter()
                    .map(|t| t.clone().expect("all restrictions determined"))
                    .collect();
                let labels = sizes.iter().map(|&n| numeric_labels(n)).collect();
                visit(PshSet {
                    cat: cat.clone(),
                    labels,
                    restrict,
                })
            },
        )?;
        Ok(())
    }
}

struct Search<'b> {
    rels: &'b Relations,
    domains: &'b [Vec<Vec<usize>>],
    /// by generator position
    assigned: Vec<bool>,
    tables: Vec<Option<Vec<usize>>>,
}

impl Search<'_> {
    /// Sets `F(t ∘ m)` from `F(t)` and `F(m)`; false on a conflict.
    fn derive(
        &mut self,
        t: Mor,
        m: Mor,
        tm: Mor,
        trail: &mut Vec<Mor>,
        queue: &mut Vec<Mor>,
    ) -> bool {
        let table: Vec<usize> = {
            let (ft, fm) = (
                self.tables[t].as_ref().unwrap(),
                self.tables[m].as_ref().unwrap(),
            );
            ft.iter().map(|&e| fm[e]).collect()
        };
        match &self.tables[tm] {
            Some(existing) => *existing == table,
            None => {
                self.tables[tm] = Some(table);
                trail.push(tm);
                queue.push(tm);
                true
            }
        }
    }

    /// Propagates the assignment of generator `k`.
    fn close(&mut self, k: usize, trail: &mut Vec<Mor>) -> bool {
        let rels = self.rels;
        let s = rels.gens[k];
        let mut queue = vec![s];
        for &(m, sm) in &rels.right[k] {
            if self.tables[m].is_some() && !self.derive(s, m, sm, trail, &mut queue) {
                return false;
            }
        }
        while let Some(x) = queue.pop() {
            for &(j, tx) in &rels.left[x] {
                if self.assigned[j] && !self.derive(rels.gens[j], x, tx, trail, &mut queue) {
                    return false;
                }
            }
        }
        true
    }

    /// Candidates for an unassigned generator that agree with every relation
    /// whose other two morphisms are already determined.
    fn candidates(&self, k: usize) -> Vec<usize> {
        let rels = self.rels;
        let s = rels.gens[k];
        if let Some(fixed) = &self.tables[s] {
            // already determined as a composite of assigned generators
            return (0..self.domains[k].len())
                .filter(|&i| self.domains[k][i] == *fixed)
                .collect();
        }
        // (other, composite, s is applied first)
        let mut checks: Vec<(&[usize], &[usize], bool)> = Vec::new();
        for &(m, sm) in &rels.right[k] {
            if let (Some(fm), Some(fsm)) = (&self.tables[m], &self.tables[sm]) {
                checks.push((fm, fsm, true));
            }
        }
        for &(j, ts) in &rels.left[s] {
            if self.assigned[j] {
                if let Some(fts) = &self.tables[ts] {
                    checks.push((self.tables[rels.gens[j]].as_ref().unwrap(), fts, false));
                }
            }
        }
        (0..self.domains[k].len())
            .filter(|&i| {
                let fs = &self.domains[k][i];
                checks.iter().all(|&(other, composite, first)| {
                    if first {
                        // F(s ∘ m) = F(m) ∘ F(s)
                        composite.iter().zip(fs).all(|(&x, &e)| x == other[e])
                    } else {
                        // F(t ∘ s) = F(s) ∘ F(t)
                        composite.iter().zip(other).all(|(&x, &e)| x == fs[e])
                    }
                })
            })
            .collect()
    }

    fn go(
        &mut self,
        cache: &mut Vec<Option<Vec<usize>>>,
        budget: &mut Budget,
        emit: &mut dyn FnMut(&[Option<Vec<usize>>]) -> bool,
    ) -> Result<bool> {
        let mut best: Option<usize> = None;
        for k in 0..self.rels.gens.len() {
            if self.assigned[k] {
                continue;
            }
            if cache[k].is_none() {
                cache[k] = Some(self.candidates(k));
            }
            let n = cache[k].as_ref().unwrap().len();
            if best.is_none_or(|b| n < cache[b].as_ref().unwrap().len()) {
                best = Some(k);
                if n <= 1 {
                    break;
                }
            }
        }
        let Some(k) = best else {
            return Ok(emit(&self.tables));
        };
        let cands = cache[k].clone().unwrap();
        let s = self.rels.gens[k];
        for i in cands {
            budget.spend(1)?;
            let derived = self.tables[s].is_some();
            if !derived {
                self.tables[s] = Some(self.domains[k][i].clone());
            }
            self.assigned[k] = true;
            let mut trail = Vec::new();
            let ok = self.close(k, &mut trail);
            let cont = if ok {
                let mut next = cache.clone();
                for &x in trail.iter().chain(std::iter::once(&s)) {
                    for &j in &self.rels.deps[x] {
                        next[j] = None;
                    }
                }
                self.go(&mut next, budget, emit)?
            } else {
                true
            };
            for m in trail {
                self.tables[m] = None;
            }
            self.assigned[k] = false;
            if !derived {
                self.tables[s] = None;
            }
            if !cont {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn all_functions(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * m);
        for f in &out {
            for v in 0..m {
                let mut g = f.clone();
                g.push(v);
                next.push(g);
            }
        }
        out = next;
    }
    out
}

/// A natural transformation between presheaves on the same category:
/// `components[x]: F(x) → G(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PshMap {
    pub components: Vec<Vec<usize>>,
}

impl PshMap {
    pub fn identity(f: &PshSet) -> PshMap {
        PshMap {
            components: f.sizes().iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    /// Component shapes and naturality on generators.
    pub fn validate(&self, f: &PshSet, g: &PshSet) -> Result<()> {
        if !same_cat(f.cat(), g.cat()) {
            return Err(Error::InvalidNatural(
                "presheaves live on different categories".into(),
            ));
        }
        let c = &**f.cat();
        if self.components.len() != c.num_objects() {
            return Err(Error::InvalidNatural("wrong number of components".into()));
        }
        for x in c.objects() {
            let comp = &self.components[x];
            if comp.len() != f.size(x) || comp.iter().any(|&e| e >= g.size(x)) {
                return Err(Error::InvalidNatural(format!(
                    "component at `{}` is not a function",
                    c.object_name(x)
                )));
            }
        }
        for &s in &c.generators().gens {
            if !self.square_commutes(f, g, s) {
                return Err(Error::InvalidNatural(format!(
                    "naturality fails at `{}`",
                    c.morphism_name(s)
                )));
            }
        }
        Ok(())
    }

    fn square_commutes(&self, f: &PshSet, g: &PshSet, m: Mor) -> bool {
        let c = &**f.cat();
        let (a, b) = (c.src(m), c.tgt(m));
        (0..f.size(b))
            .all(|e| g.restrict(m, self.components[b][e]) == self.components[a][f.restrict(m, e)])
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &PshMap) -> PshMap {
        PshMap {
            components: first
                .components
                .iter()
                .zip(&self.components)
                .map(|(f, g)| f.iter().map(|&e| g[e]).collect())
                .collect(),
        }
    }

    pub fn is_iso(&self, f: &PshSet, g: &PshSet) -> bool {
        self.components.iter().enumerate().all(|(x, comp)| {
            comp.len() == g.size(x) && {
                let mut seen = vec![false; comp.len()];
                comp.iter().all(|&e| !std::mem::replace(&mut seen[e], true))
            }
        }) && f.sizes() == g.sizes()
    }

    pub fn inverse(&self) -> PshMap {
        PshMap {
            components: self
                .components
                .iter()
                .map(|comp| {
                    let mut inv = vec![0; comp.len()];
                    for (i, &e) in comp.iter().enumerate() {
                        inv[e] = i;
                    }
                    inv
                })
                .collect(),
        }
    }

    /// All natural transformations `f → g` (bijective components only when
    /// `isos_only`), by backtracking over objects.
    fn search(
        f: &PshSet,
        g: &PshSet,
        isos_only: bool,
        limits: &Limits,
        first_only: bool,
    ) -> Result<Vec<PshMap>> {
        if !same_cat(f.cat(), g.cat()) {
            return Err(Error::InvalidNatural(
                "presheaves live on different categories".into(),
            ));
        }
        let c = &**f.cat();
        if isos_only && f.sizes() != g.sizes() {
            return Ok(Vec::new());
        }
        let domains: Vec<Vec<Vec<usize>>> = c
            .objects()
            .map(|x| {
                let all = all_functions(f.size(x), g.size(x));
                if isos_only {
                    all.into_iter()
                        .filter(|v| {
                            let mut seen = vec![false; v.len()];
                            v.iter().all(|&e| !std::mem::replace(&mut seen[e], true))
                        })
                        .collect()
                } else {
                    all
                }
            })
            .collect();
        let mut checks: Vec<Vec<Mor>> = vec![Vec::new(); c.num_objects()];
        for &s in &c.generators().gens {
            checks[c.src(s).max(c.tgt(s))].push(s);
        }
        let mut budget = limits.budget();
        let mut out = Vec::new();
        for_each_assignment(
            &domains,
            &mut budget,
            &mut |k, comps: &[Vec<usize>]| {
                checks[k].iter().all(|&s| {
                    let (a, b) = (c.src(s), c.tgt(s));
                    (0..f.size(b)).all(|e| g.restrict(s, comps[b][e]) == comps[a][f.restrict(s, e)])
                })
            },
            &mut |comps| {
                out.push(PshMap {
                    components: comps.to_vec(),
                });
                !first_only
            },
        )?;
        Ok(out)
    }

    pub fn enumerate(f: &PshSet, g: &PshSet, limits: &Limits) -> Result<Vec<PshMap>> {
        PshMap::search(f, g, false, limits, false)
    }

    pub fn isomorphisms(f: &PshSet, g: &PshSet, limits: &Limits) -> Result<Vec<PshMap>> {
        PshMap::search(f, g, true, limits, false)
    }

    /// The first isomorphism `f → g` in enumeration order.
    pub fn find_iso(f: &PshSet, g: &PshSet, limits: &Limits) -> Result<Option<PshMap>> {
        Ok(PshMap::search(f, g, true, limits, true)?.into_iter().next())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    /// Brute force: every assignment of tables to every morphism, filtered by
    /// identities and all composites.
    fn brute_force_count(cat: &FinCat, sizes: &[usize]) -> usize {
        let domains: Vec<Vec<Vec<usize>>> = cat
            .morphisms()
            .map(|m| all_functions(sizes[cat.tgt(m)], sizes[cat.src(m)]))
            .collect();
        let mut count = 0;
        let mut budget = Limits::default().budget();
        crate::search::for_each_assignment(
            &domains,
            &mut budget,
            &mut |_, _| true,
            &mut |choice: &[Vec<usize>]| {
                let ids = cat.objects().all(|o| {
                    choice[cat.identity(o)]
                        .iter()
                        .enumerate()
                        .all(|(i, &j)| i == j)
                });
                let comp = cat.morphisms().all(|g| {
                    cat.morphisms_into(cat.src(g)).iter().all(|&f| {
                        let gf = &choice[cat.compose(g, f)];
                        gf.iter().zip(&choice[g]).all(|(&x, &e)| x == choice[f][e])
                    })
                });
                if ids && comp {
                    count += 1;
                }
                true
            },
        )
        .unwrap();
        count
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let cats = [
            FinCat::cyclic_group(2),
            FinCat::interval(),
            (**fixtures::s2().cat()).clone(),
        ];
        for cat in cats {
            let cat = Arc::new(cat);
            let n = cat.num_objects();
            let mut sizes = vec![0; n];
            loop {
                let fast = PshSet::enumerate_with_sizes(&cat, &sizes, &Limits::default()).unwrap();
                assert_eq!(
                    fast.len(),
                    brute_force_count(&cat, &sizes),
                    "sizes {sizes:?}"
                );
                for f in &fast {
                    f.validate().unwrap();
                }
                // next size vector with entries ≤ 2
                let mut i = 0;
                while i < n && sizes[i] == 2 {
                    sizes[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
                sizes[i] += 1;
            }
        }
    }

    #[test]
    fn actions_of_cyclic_group_on_three_points() {
        // involutions of a 3-element set: identity and three transpositions
        let cat = Arc::new(FinCat::cyclic_group(2));
        let all = PshSet::enumerate_with_sizes(&cat, &[3], &Limits::default()).unwrap();
        assert_eq!(all.len(), 4);
    }

    #[test]
    fn representable_is_valid_and_has_hom_sizes() {
        let site = fixtures::bg2();
        let c = site.cat();
        let g = c.object_by_name("G").unwrap();
        let h = PshSet::representable(c.clone(), g);
        h.validate().unwrap();
        assert_eq!(h.sizes(), vec![2, 4, 16]);
    }

    #[test]
    fn isomorphisms_of_representables() {
        let site = fixtures::s2();
        let c = site.cat();
        let x = c.object_by_name("X").unwrap();
        let h = PshSet::representable(c.clone(), x);
        let isos = PshMap::isomorphisms(&h, &h, &Limits::default()).unwrap();
        assert_eq!(isos.len(), 1);
    }
}
