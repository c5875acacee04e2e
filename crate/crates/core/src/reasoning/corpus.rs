use std::collections::HashSet;

use crate::logic::Formula;

/// All formulas of depth at most `depth` over `vars`, without duplicates,
/// truncated to `cap` entries.
///
/// Order: by depth; within a depth, `¬ □ ◇` over the previous layer, then
/// `∧ ∨ ⇒` over all pairs with at least one argument of the previous depth.
/// Depth 0 is `⊤, ⊥, vars…`. The order is stable, so `corpus(d)` is a
/// prefix of `corpus(d + 1)`.
pub fn generate_corpus<S: AsRef<str>>(vars: &[S], depth: usize, cap: usize) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    let mut seen: HashSet<Formula> = HashSet::new();
    let mut push = |f: Formula, out: &mut Vec<Formula>| {
        if out.len() < cap && seen.insert(f.clone()) {
            out.push(f);
        }
        out.len() < cap
    };
    let mut atoms = vec![Formula::top(), Formula::bot()];
    atoms.extend(vars.iter().map(|v| Formula::var(v.as_ref())));
    for a in atoms {
        if !push(a, &mut out) {
            return out;
        }
    }
    // `layers[k]` is the index range of depth-k formulas in `out`.
    #[allow(clippy::single_range_in_vec_init)]
    let mut layers = vec![0..out.len()];
    for _ in 1..=depth {
        let prev = layers.last().unwrap().clone();
        let start = out.len();
        let below = prev.end;
        let unary: [fn(Formula) -> Formula; 3] = [Formula::not, Formula::boxed, Formula::dia];
        for make in unary {
            for i in prev.clone() {
                let f = make(out[i].clone());
                if !push(f, &mut out) {
                    return out;
                }
            }
        }
        let binary: [fn(Formula, Formula) -> Formula; 3] =
            [Formula::and, Formula::or, Formula::imp];
        for make in binary {
            for i in 0..below {
                for j in 0..below {
                    if !prev.contains(&i) && !prev.contains(&j) {
                        continue;
                    }
                    let f = make(out[i].clone(), out[j].clone());
                    if !push(f, &mut out) {
                        return out;
                    }
                }
            }
        }
        layers.push(start..out.len());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    #[test]
    fn depth_zero() {
        let c = generate_corpus(&["p"], 0, 100);
        assert_eq!(c, vec![Formula::top(), Formula::bot(), Formula::var("p")]);
    }

    #[test]
    fn depth_one_contents() {
        let c = generate_corpus(&["p"], 1, 1000);
        for s in [
            "~p", "[]p", "<>p", "p & p", "p | p", "p -> p", "T & F", "F -> p",
        ] {
            assert!(c.contains(&parse_formula(s).unwrap()), "{s}");
        }
        assert_eq!(c.len(), 3 + 9 + 27);
    }

    #[test]
    fn sizes_over_two_variables() {
        assert_eq!(generate_corpus(&["p", "q"], 0, usize::MAX).len(), 4);
        assert_eq!(generate_corpus(&["p", "q"], 1, usize::MAX).len(), 64);
        assert_eq!(
            generate_corpus(&["p", "q"], 2, usize::MAX).len(),
            64 + 3 * 60 + 3 * (64 * 64 - 16)
        );
    }

    #[test]
    fn monotone_and_capped() {
        let c1 = generate_corpus(&["p", "q"], 1, usize::MAX);
        let c2 = generate_corpus(&["p", "q"], 2, usize::MAX);
        assert_eq!(&c2[..c1.len()], &c1[..]);
        assert_eq!(generate_corpus(&["p", "q"], 2, 100), c2[..100].to_vec());
        let d: Vec<usize> = c2.iter().map(|f| f.depth()).collect();
        assert!(d.windows(2).all(|w| w[0] <= w[1]));
    }
}
