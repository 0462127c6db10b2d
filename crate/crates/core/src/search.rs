//! Depth-first enumeration of assignments with incremental constraint checks.

use crate::error::Result;
use crate::limits::Budget;

/// Enumerates all assignments `v[k] ∈ domains[k]` such that `accept(k, &v[..=k])`
/// holds at every depth `k`, in lexicographic order of domain positions.
pub fn backtrack<V, F>(
    domains: &[Vec<V>],
    budget: &mut Budget,
    mut accept: F,
) -> Result<Vec<Vec<V>>>
where
    V: Clone,
    F: FnMut(usize, &[V]) -> bool,
{
    let mut out = Vec::new();
    for_each_assignment(domains, budget, &mut accept, &mut |v| {
        out.push(v.to_vec());
        true
    })?;
    Ok(out)
}

/// Like [`backtrack`], but streams solutions to `visit`; enumeration stops
/// early when `visit` returns false.
pub fn for_each_assignment<V, F, G>(
    domains: &[Vec<V>],
    budget: &mut Budget,
    accept: &mut F,
    visit: &mut G,
) -> Result<()>
where
    V: Clone,
    F: FnMut(usize, &[V]) -> bool,
    G: FnMut(&[V]) -> bool,
{
    let n = domains.len();
    if domains.iter().any(Vec::is_empty) {
        return Ok(());
    }
    if n == 0 {
        visit(&[]);
        return Ok(());
    }
    let mut pos = vec![0usize; n];
    let mut cur: Vec<V> = Vec::with_capacity(n);
    let mut k = 0usize;
    loop {
        // try domains[k][pos[k]..]
        let mut placed = false;
        while pos[k] < domains[k].len() {
            budget.spend(1)?;
            cur.truncate(k);
            cur.push(domains[k][pos[k]].clone());
            pos[k] += 1;
            if accept(k, &cur) {
                placed = true;
                break;
            }
        }
        if placed {
            if k + 1 == n {
                if !visit(&cur) {
                    return Ok(());
                }
            } else {
                k += 1;
                pos[k] = 0;
                continue;
            }
        } else {
            if k == 0 {
                return Ok(());
            }
            k -= 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::Limits;

    #[test]
    fn enumerates_constrained_pairs() {
        let domains = vec![vec![0, 1, 2], vec![0, 1, 2]];
        let mut budget = Limits::default().budget();
        let sols = backtrack(&domains, &mut budget, |k, v| k == 0 || v[0] < v[1]).unwrap();
        assert_eq!(sols, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }

    #[test]
    fn empty_domain_list_has_one_solution() {
        let domains: Vec<Vec<u8>> = vec![];
        let mut budget = Limits::default().budget();
        assert_eq!(
            backtrack(&domains, &mut budget, |_, _| true).unwrap().len(),
            1
        );
    }

    #[test]
    fn budget_is_enforced() {
        let domains = vec![vec![0; 10]; 6];
        let mut budget = Limits::new(100).budget();
        assert!(backtrack(&domains, &mut budget, |_, _| true).is_err());
    }
}
