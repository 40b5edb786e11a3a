//! Distance and cycle formulas.
//!
//! Free variables are `x1`, `x2`, `x3` as in each formula's signature (and
//! `x` for the avoided vertex of the tilde family); bound variables are
//! fresh names `x<k>` allocated in increasing order, so printed formulas
//! are stable.

use super::Formula;
use crate::error::{Error, Result};

struct Names {
    next: usize,
}

impl Names {
    fn starting_after(last_free: usize) -> Self {
        Names { next: last_free + 1 }
    }

    fn fresh(&mut self) -> String {
        let v = format!("x{}", self.next);
        self.next += 1;
        v
    }
}

fn check(i: usize, min_i: usize, s: usize) -> Result<()> {
    if s < 2 {
        return Err(Error::Domain(format!("s = {s}: need s >= 2")));
    }
    if i < min_i {
        return Err(Error::Domain(format!("index {i}: need at least {min_i}")));
    }
    Ok(())
}

fn d(i: usize, s: usize, a: &str, b: &str, names: &mut Names) -> Formula {
    if i == 1 {
        let rest: Vec<String> = (2..s).map(|_| names.fresh()).collect();
        let mut args = vec![a.to_string(), b.to_string()];
        args.extend(rest.iter().cloned());
        return Formula::or(vec![
            Formula::eq(a, b),
            Formula::exists_all(&rest, Formula::Edge(args)),
        ]);
    }
    let mid = names.fresh();
    let left = d(i / 2, s, a, &mid, names);
    let right = d(i.div_ceil(2), s, &mid, b, names);
    Formula::exists(mid, Formula::and(vec![left, right]))
}

fn d_eq(i: usize, s: usize, a: &str, b: &str, names: &mut Names) -> Formula {
    let within = d(i, s, a, b, names);
    let closer = if i == 1 {
        Formula::eq(a, b)
    } else {
        d(i - 1, s, a, b, names)
    };
    Formula::and(vec![within, Formula::not(closer)])
}

fn dtilde(i: usize, s: usize, avoid: &str, a: &str, b: &str, names: &mut Names) -> Formula {
    let guards = vec![Formula::neq(a, avoid), Formula::neq(b, avoid)];
    let core = if i == 1 {
        let rest: Vec<String> = (2..s).map(|_| names.fresh()).collect();
        let mut args = vec![a.to_string(), b.to_string()];
        args.extend(rest.iter().cloned());
        let mut parts = vec![Formula::Edge(args)];
        parts.extend(rest.iter().map(|v| Formula::neq(v.clone(), avoid)));
        Formula::or(vec![
            Formula::eq(a, b),
            Formula::exists_all(&rest, Formula::and(parts)),
        ])
    } else {
        let mid = names.fresh();
        let left = dtilde(i / 2, s, avoid, a, &mid, names);
        let right = dtilde(i.div_ceil(2), s, avoid, &mid, b, names);
        Formula::exists(
            mid.clone(),
            Formula::and(vec![Formula::neq(mid, avoid), left, right]),
        )
    };
    let mut parts = guards;
    parts.push(core);
    Formula::and(parts)
}

fn b_form(i: usize, s: usize, x1: &str, x2: &str, x3: &str, names: &mut Names) -> Formula {
    Formula::and(vec![
        d_eq(i / 2, s, x1, x3, names),
        d_eq(i.div_ceil(2), s, x3, x2, names),
    ])
}

fn c_form(i: usize, s: usize, x1: &str, names: &mut Names) -> Formula {
    let x2 = names.fresh();
    let x3 = names.fresh();
    let far = d_eq(i, s, x1, &x2, names);
    let split = b_form(i + 1, s, x1, &x2, &x3, names);
    let detour = dtilde(i, s, &x3, x1, &x2, names);
    Formula::exists(
        x2.clone(),
        Formula::and(vec![far, Formula::exists(x3, Formula::and(vec![split, detour]))]),
    )
}

/// `D_i(x1, x2)`: the distance between `x1` and `x2` is at most `i`.
pub fn build_d(i: usize, s: usize) -> Result<Formula> {
    check(i, 1, s)?;
    Ok(d(i, s, "x1", "x2", &mut Names::starting_after(2)))
}

/// `D=_i(x1, x2)`: the distance is exactly `i`.
pub fn build_d_eq(i: usize, s: usize) -> Result<Formula> {
    check(i, 1, s)?;
    Ok(d_eq(i, s, "x1", "x2", &mut Names::starting_after(2)))
}

/// `D~_i(x, x1, x2)`: some path of length at most `i` joins `x1` and `x2`
/// without touching `x`.
pub fn build_dtilde(i: usize, s: usize) -> Result<Formula> {
    check(i, 1, s)?;
    Ok(dtilde(i, s, "x", "x1", "x2", &mut Names::starting_after(2)))
}

/// `B_i(x1, x2, x3) = D=_{floor(i/2)}(x1, x3) and D=_{ceil(i/2)}(x3, x2)`.
pub fn build_b(i: usize, s: usize) -> Result<Formula> {
    check(i, 2, s)?;
    Ok(b_form(i, s, "x1", "x2", "x3", &mut Names::starting_after(3)))
}

/// `C_i(x1)`: `x1` lies on a short cycle witnessed by a vertex at distance
/// `i` reachable by two internally separated routes.
pub fn build_c(i: usize, s: usize) -> Result<Formula> {
    check(i, 1, s)?;
    Ok(c_form(i, s, "x1", &mut Names::starting_after(1)))
}

/// The closed sentence
/// `exists x1 x2 (D=_{a1}(x1,x2) and exists x3 (B_{a1}(x1,x2,x3) and Q(x3))
///  and exists x3 (B_{a1}(x1,x2,x3) and not Q(x3)))`
/// with `Q(x3) = exists x4 (D=_{a3}(x3, x4) and C_{a2}(x4))`.
pub fn build_thm9_l(a1: usize, a2: usize, a3: usize, s: usize) -> Result<Formula> {
    if s < 2 || a1 < 2 || a2 < 1 || a3 < 1 || a2 >= a1 {
        return Err(Error::Domain(format!(
            "need a1 >= 2, a2 >= 1, a3 >= 1, a2 < a1 and s >= 2; got a1={a1}, a2={a2}, a3={a3}, s={s}"
        )));
    }
    let mut names = Names::starting_after(0);
    let x1 = names.fresh();
    let x2 = names.fresh();
    let q = |x3: &str, names: &mut Names| {
        let x4 = names.fresh();
        let near = d_eq(a3, s, x3, &x4, names);
        let cyc = c_form(a2, s, &x4, names);
        Formula::exists(x4, Formula::and(vec![near, cyc]))
    };
    let far = d_eq(a1, s, &x1, &x2, &mut names);
    let y = names.fresh();
    let split_yes = b_form(a1, s, &x1, &x2, &y, &mut names);
    let q_yes = q(&y, &mut names);
    let z = names.fresh();
    let split_no = b_form(a1, s, &x1, &x2, &z, &mut names);
    let q_no = q(&z, &mut names);
    let body = Formula::and(vec![
        far,
        Formula::exists(y, Formula::and(vec![split_yes, q_yes])),
        Formula::exists(z, Formula::and(vec![split_no, Formula::not(q_no)])),
    ]);
    Ok(Formula::exists(x1, Formula::exists(x2, body)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn log2_ceil(i: usize) -> usize {
        (usize::BITS - (i - 1).leading_zeros()) as usize
    }

    #[test]
    fn depths() {
        assert_eq!(build_d(1, 3).unwrap().quantifier_depth(), 1);
        assert_eq!(build_c(4, 3).unwrap().quantifier_depth(), 5);
        assert_eq!(build_dtilde(2, 3).unwrap().quantifier_depth(), 2);
        assert_eq!(build_thm9_l(5, 1, 4, 3).unwrap().quantifier_depth(), 7);
        for s in 2..=4 {
            for i in 1..=20 {
                assert_eq!(build_d_eq(i, s).unwrap().quantifier_depth(), log2_ceil(i) + s - 2);
                assert_eq!(build_dtilde(i, s).unwrap().quantifier_depth(), log2_ceil(i) + s - 2);
            }
        }
    }

    #[test]
    fn free_variables() {
        let names = |f: Formula| f.free_vars().into_iter().collect::<Vec<_>>();
        assert_eq!(names(build_d(5, 3).unwrap()), ["x1", "x2"]);
        assert_eq!(names(build_dtilde(3, 3).unwrap()), ["x", "x1", "x2"]);
        assert_eq!(names(build_b(3, 3).unwrap()), ["x1", "x2", "x3"]);
        assert_eq!(names(build_c(2, 3).unwrap()), ["x1"]);
        assert!(build_thm9_l(2, 1, 1, 3).unwrap().is_sentence());
    }

    #[test]
    fn d1_shape() {
        assert_eq!(
            build_d(1, 3).unwrap().to_string(),
            "(or (= x1 x2) (exists x3 (N x1 x2 x3)))"
        );
        assert_eq!(build_d(1, 2).unwrap().to_string(), "(or (= x1 x2) (N x1 x2))");
    }

    #[test]
    fn domain_errors() {
        assert!(build_d(0, 3).is_err());
        assert!(build_b(1, 3).is_err());
        assert!(build_thm9_l(2, 2, 1, 3).is_err());
    }
}
