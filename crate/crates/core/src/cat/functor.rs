use std::sync::Arc;

use super::fincat::{FinCat, Mor, Obj};
use crate::error::{Error, Result};

/// A functor between finite categories, stored as object and morphism tables.
#[derive(Clone, Debug)]
pub struct Functor {
    dom: Arc<FinCat>,
    cod: Arc<FinCat>,
    obj: Vec<Obj>,
    mor: Vec<Mor>,
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        same_cat(&self.dom, &other.dom)
            && same_cat(&self.cod, &other.cod)
            && self.obj == other.obj
            && self.mor == other.mor
    }
}

impl Eq for Functor {}

pub fn same_cat(a: &Arc<FinCat>, b: &Arc<FinCat>) -> bool {
    Arc::ptr_eq(a, b) || a.structurally_eq(b)
}

impl Functor {
    /// Validates endpoints, identities and composition (on a generating set,
    /// which suffices by induction on word length).
    pub fn new(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        obj: Vec<Obj>,
        mor: Vec<Mor>,
    ) -> Result<Functor> {
        let f = Functor::new_unchecked(dom, cod, obj, mor);
        f.validate()?;
        Ok(f)
    }

    pub fn new_unchecked(
        dom: Arc<FinCat>,
        cod: Arc<FinCat>,
        obj: Vec<Obj>,
        mor: Vec<Mor>,
    ) -> Functor {
        Functor { dom, cod, obj, mor }
    }

    pub fn validate(&self) -> Result<()> {
        let (d, c) = (&*self.dom, &*self.cod);
        if self.obj.len() != d.num_objects() || self.mor.len() != d.num_morphisms() {
            return Err(Error::InvalidFunctor(
                "table sizes do not match the domain".into(),
            ));
        }
        if self.obj.iter().any(|&o| o >= c.num_objects())
            || self.mor.iter().any(|&m| m >= c.num_morphisms())
        {
            return Err(Error::InvalidFunctor(
                "table entry outside the codomain".into(),
            ));
        }
        for m in d.morphisms() {
            let fm = self.mor[m];
            if c.src(fm) != self.obj[d.src(m)] || c.tgt(fm) != self.obj[d.tgt(m)] {
                return Err(Error::InvalidFunctor(format!(
                    "`{}` is sent to `{}` with mismatched endpoints",
                    d.morphism_name(m),
                    c.morphism_name(fm)
                )));
            }
        }
        for o in d.objects() {
            if self.mor[d.identity(o)] != c.identity(self.obj[o]) {
                return Err(Error::InvalidFunctor(format!(
                    "identity of `{}` is not preserved",
                    d.object_name(o)
                )));
            }
        }
        for &s in &d.generators().gens {
            for &f in d.morphisms_into(d.src(s)) {
                if self.mor[d.compose(s, f)] != c.compose(self.mor[s], self.mor[f]) {
                    return Err(Error::InvalidFunctor(format!(
                        "composite `{}` ∘ `{}` is not preserved",
                        d.morphism_name(s),
                        d.morphism_name(f)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn identity(cat: Arc<FinCat>) -> Functor {
        let obj = cat.objects().collect();
        let mor = cat.morphisms().collect();
        Functor {
            dom: cat.clone(),
            cod: cat,
            obj,
            mor,
        }
    }

    /// The unique functor to the terminal category.
    pub fn to_terminal(dom: Arc<FinCat>, terminal: Arc<FinCat>) -> Functor {
        assert_eq!(terminal.num_morphisms(), 1);
        let obj = vec![0; dom.num_objects()];
        let mor = vec![0; dom.num_morphisms()];
        Functor {
            dom,
            cod: terminal,
            obj,
            mor,
        }
    }

    /// The functor from the terminal category picking out `o`.
    pub fn point(terminal: Arc<FinCat>, cod: Arc<FinCat>, o: Obj) -> Functor {
        let id = cod.identity(o);
        Functor {
            dom: terminal,
            cod,
            obj: vec![o],
            mor: vec![id],
        }
    }

    pub fn dom(&self) -> &Arc<FinCat> {
        &self.dom
    }
    pub fn cod(&self) -> &Arc<FinCat> {
        &self.cod
    }
    pub fn obj(&self, o: Obj) -> Obj {
        self.obj[o]
    }
    pub fn mor(&self, m: Mor) -> Mor {
        self.mor[m]
    }
    pub fn obj_table(&self) -> &[Obj] {
        &self.obj
    }
    pub fn mor_table(&self) -> &[Mor] {
        &self.mor
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Functor) -> Functor {
        assert!(
            same_cat(&first.cod, &self.dom),
            "functor composition with mismatched categories"
        );
        Functor {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            obj: first.obj.iter().map(|&o| self.obj[o]).collect(),
            mor: first.mor.iter().map(|&m| self.mor[m]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        same_cat(&self.dom, &self.cod)
            && self.obj.iter().enumerate().all(|(i, &o)| i == o)
            && self.mor.iter().enumerate().all(|(i, &m)| i == m)
    }

    /// True when the functor is bijective on objects and morphisms.
    pub fn is_isomorphism(&self) -> bool {
        let bij = |v: &[usize], n: usize| {
            if v.len() != n {
                return false;
            }
            let mut seen = vec![false; n];
            v.iter().all(|&x| !std::mem::replace(&mut seen[x], true))
        };
        bij(&self.obj, self.cod.num_objects()) && bij(&self.mor, self.cod.num_morphisms())
    }
}
