//! Standard small categories used throughout: points, intervals, cyclic groups,
//! posets and full subcategories of finite sets.

use std::collections::HashMap;

use super::fincat::{FinCat, Mor, Obj};
use crate::error::{Error, Result};

impl FinCat {
    /// One object, identity only.
    pub fn terminal() -> FinCat {
        Self::discrete(&["*"])
    }

    pub fn empty() -> FinCat {
        Self::discrete::<&str>(&[])
    }

    /// Objects only, identities only. Identity of `x` is named `id_x`.
    pub fn discrete<S: AsRef<str>>(names: &[S]) -> FinCat {
        let objects: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        let morphisms = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (format!("id_{o}"), i, i))
            .collect();
        let identity = (0..objects.len()).collect();
        FinCat::from_fn(objects, morphisms, identity, |g, f| {
            debug_assert_eq!(g, f);
            g
        })
        .expect("discrete category identifiers are distinct")
    }

    /// The interval groupoid: objects `0`, `1` and a unique isomorphism each way.
    pub fn interval() -> FinCat {
        let objects = vec!["0".to_string(), "1".to_string()];
        let morphisms = vec![
            ("id_0".to_string(), 0, 0),
            ("id_1".to_string(), 1, 1),
            ("u".to_string(), 0, 1),
            ("u_inv".to_string(), 1, 0),
        ];
        let table = |g: Mor, f: Mor| -> Mor {
            match (g, f) {
                (0, f) => f,
                (1, f) => f,
                (g, 0) | (g, 1) => g,
                (2, 3) => 1,
                (3, 2) => 0,
                _ => unreachable!(),
            }
        };
        FinCat::from_fn(objects, morphisms, vec![0, 1], table).expect("interval groupoid")
    }

    /// One-object groupoid of the cyclic group of order `n`; morphism `g{k}` is `k mod n`.
    pub fn cyclic_group(n: usize) -> FinCat {
        assert!(n > 0);
        let morphisms = (0..n).map(|k| (format!("g{k}"), 0, 0)).collect();
        FinCat::from_fn(vec!["*".to_string()], morphisms, vec![0], move |g, f| {
            (g + f) % n
        })
        .expect("cyclic group")
    }

    /// Poset on `elements` generated by the pairs `(a, b)` meaning `a ≤ b`.
    /// The morphism `a → b` is named `a<=b`; identities are `id_a`.
    pub fn poset<S: AsRef<str>>(elements: &[S], leq: &[(S, S)]) -> Result<FinCat> {
        let objects: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let n = objects.len();
        let idx: HashMap<&str, usize> = objects
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        for (a, b) in leq {
            let a = *idx
                .get(a.as_ref())
                .ok_or_else(|| Error::UnknownId(a.as_ref().to_string()))?;
            let b = *idx
                .get(b.as_ref())
                .ok_or_else(|| Error::UnknownId(b.as_ref().to_string()))?;
            rel[a * n + b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if rel[i * n + k] && rel[k * n + j] {
                        rel[i * n + j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && rel[i * n + j] && rel[j * n + i] {
                    return Err(Error::InvalidDiagram(format!(
                        "poset relation is not antisymmetric on `{}`, `{}`",
                        objects[i], objects[j]
                    )));
                }
            }
        }
        let mut morphisms = Vec::new();
        let mut mor_of = vec![usize::MAX; n * n];
        let mut identity = vec![0; n];
        for i in 0..n {
            for j in 0..n {
                if rel[i * n + j] {
                    mor_of[i * n + j] = morphisms.len();
                    if i == j {
                        identity[i] = morphisms.len();
                        morphisms.push((format!("id_{}", objects[i]), i, i));
                    } else {
                        morphisms.push((format!("{}<={}", objects[i], objects[j]), i, j));
                    }
                }
            }
        }
        let ends: Vec<(Obj, Obj)> = morphisms.iter().map(|m| (m.1, m.2)).collect();
        FinCat::from_fn(objects, morphisms, identity, |g, f| {
            mor_of[ends[f].0 * n + ends[g].1]
        })
    }

    /// Full subcategory of finite sets on sets `{0..size}`. A function `f` with
    /// source size `s` is encoded by its image list and named `name[i0 i1 ..]`.
    pub fn finite_sets<S: AsRef<str>>(objects: &[(S, usize)]) -> Result<FinCat> {
        let names: Vec<String> = objects
            .iter()
            .map(|(s, _)| s.as_ref().to_string())
            .collect();
        let sizes: Vec<usize> = objects.iter().map(|(_, k)| *k).collect();
        let n = names.len();
        let mut morphisms = Vec::new();
        let mut maps: Vec<Vec<usize>> = Vec::new();
        let mut offset = vec![0usize; n * n];
        for a in 0..n {
            for b in 0..n {
                offset[a * n + b] = morphisms.len();
                let count = (sizes[b] as u64)
                    .checked_pow(sizes[a] as u32)
                    .unwrap_or(u64::MAX);
                if count > 100_000 {
                    return Err(Error::TooLarge {
                        needed: count as u128,
                        bound: 100_000,
                    });
                }
                for code in 0..count as usize {
                    let images = decode(code, sizes[a], sizes[b]);
                    let label = images
                        .iter()
                        .map(|i| i.to_string())
                        .collect::<Vec<_>>()
                        .join(" ");
                    morphisms.push((format!("{}->{}[{}]", names[a], names[b], label), a, b));
                    maps.push(images);
                }
            }
        }
        let identity: Vec<Mor> = (0..n)
            .map(|a| offset[a * n + a] + encode(&(0..sizes[a]).collect::<Vec<_>>(), sizes[a]))
            .collect();
        let ends: Vec<(Obj, Obj)> = morphisms.iter().map(|m| (m.1, m.2)).collect();
        FinCat::from_fn(names, morphisms, identity, |g, f| {
            let (a, _) = ends[f];
            let (_, c) = ends[g];
            let composite: Vec<usize> = maps[f].iter().map(|&x| maps[g][x]).collect();
            offset[a * n + c] + encode(&composite, sizes[c])
        })
    }

    /// Looks up the function with the given images in a finite-sets category.
    pub fn function(&self, src: Obj, tgt: Obj, images: &[usize]) -> Result<Mor> {
        let label = images
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        self.morphism_by_name(&format!(
            "{}->{}[{}]",
            self.object_name(src),
            self.object_name(tgt),
            label
        ))
    }
}

/// Image list of a function, read off its finite-sets name.
pub fn function_images(name: &str) -> Option<Vec<usize>> {
    let open = name.rfind('[')?;
    let body = name[open + 1..].strip_suffix(']')?;
    if body.is_empty() {
        return Some(Vec::new());
    }
    body.split(' ').map(|t| t.parse().ok()).collect()
}

// First coordinate most significant: index order is lexicographic order of image lists.
fn decode(mut code: usize, len: usize, base: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = code % base;
        code /= base;
    }
    out
}

fn encode(images: &[usize], base: usize) -> usize {
    images.iter().fold(0, |acc, &x| acc * base + x)
}
