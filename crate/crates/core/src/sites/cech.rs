//! Čech nerves of covers: ordered iterated fiber products over the target.

use std::collections::HashMap;

use super::{Cover, Site};
use crate::cat::{Mor, Obj};
use crate::error::{Error, Result};

/// `U_{i0..in}` with its projections to each `U_{ik}` and its map to the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CechSimplex {
    pub tuple: Vec<usize>,
    pub apex: Obj,
    pub proj: Vec<Mor>,
    pub to_target: Mor,
}

/// Levels `0..=top` of the Čech nerve. Ordered tuples with repetitions are all
/// present; `U_{i0..in}` is the chosen pullback of `U_{i0..i(n-1)} → X` and
/// `u_{in}`.
#[derive(Debug, Clone)]
pub struct CechNerve {
    pub cover: Cover,
    pub levels: Vec<Vec<CechSimplex>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl CechNerve {
    pub fn new(site: &Site, cover: &Cover, top: usize) -> Result<CechNerve> {
        let c = site.cat();
        let k = cover.legs.len();
        let mut levels: Vec<Vec<CechSimplex>> = Vec::new();
        let base: Vec<CechSimplex> = cover
            .legs
            .iter()
            .enumerate()
            .map(|(i, &u)| CechSimplex {
                tuple: vec![i],
                apex: c.src(u),
                proj: vec![c.identity(c.src(u))],
                to_target: u,
            })
            .collect();
        levels.push(base);
        for _ in 1..=top {
            let prev = levels.last().unwrap();
            let mut next = Vec::with_capacity(prev.len() * k);
            for s in prev {
                for (i, &u) in cover.legs.iter().enumerate() {
                    let cone = site.pullback(s.to_target, u)?;
                    let mut tuple = s.tuple.clone();
                    tuple.push(i);
                    let mut proj: Vec<Mor> =
                        s.proj.iter().map(|&p| c.compose(p, cone.p1)).collect();
                    proj.push(cone.p2);
                    next.push(CechSimplex {
                        tuple,
                        apex: cone.apex,
                        proj,
                        to_target: c.compose(s.to_target, cone.p1),
                    });
                }
            }
            levels.push(next);
        }
        let index = levels
            .iter()
            .map(|l| {
                l.iter()
                    .enumerate()
                    .map(|(n, s)| (s.tuple.clone(), n))
                    .collect()
            })
            .collect();
        Ok(CechNerve {
            cover: cover.clone(),
            levels,
            index,
        })
    }

    pub fn simplex(&self, tuple: &[usize]) -> &CechSimplex {
        &self.levels[tuple.len() - 1][self.index[tuple.len() - 1][tuple]]
    }

    pub fn position(&self, tuple: &[usize]) -> usize {
        self.index[tuple.len() - 1][tuple]
    }

    /// The unique `m: U_{tuple} → U_{target}` with `proj'_l ∘ m = proj_{sel(l)}`,
    /// where `target[l] = tuple[sel[l]]`.
    fn induced(&self, site: &Site, tuple: &[usize], sel: &[usize]) -> Result<Mor> {
        let c = site.cat();
        let s = self.simplex(tuple);
        let target: Vec<usize> = sel.iter().map(|&l| tuple[l]).collect();
        let t = self.simplex(&target);
        let found: Vec<Mor> = c
            .hom(s.apex, t.apex)
            .iter()
            .copied()
            .filter(|&m| {
                sel.iter()
                    .enumerate()
                    .all(|(l, &j)| c.compose(t.proj[l], m) == s.proj[j])
            })
            .collect();
        match found.as_slice() {
            [m] => Ok(*m),
            _ => Err(Error::Invariant(format!(
                "Čech structure map {:?} → {:?} is not uniquely determined ({} candidates)",
                tuple,
                target,
                found.len()
            ))),
        }
    }

    /// Face `d_k: U_{i0..in} → U_{i0..îk..in}`.
    pub fn face(&self, site: &Site, tuple: &[usize], k: usize) -> Result<Mor> {
        let sel: Vec<usize> = (0..tuple.len()).filter(|&l| l != k).collect();
        self.induced(site, tuple, &sel)
    }

    /// Degeneracy `s_k: U_{i0..in} → U_{i0..ik ik..in}`.
    pub fn degeneracy(&self, site: &Site, tuple: &[usize], k: usize) -> Result<Mor> {
        let mut sel: Vec<usize> = (0..tuple.len()).collect();
        sel.insert(k, k);
        self.induced(site, tuple, &sel)
    }
}
