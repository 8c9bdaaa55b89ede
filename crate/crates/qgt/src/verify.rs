//! Verification passes: the defining relations of the quantum enveloping
//! algebra checked term by term on an enumerated basis, separation of the
//! Gelfand-Tsetlin eigenvalue tuples, the irreducibility criterion, and
//! construction of the finite-dimensional standard modules.

use num::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{QgtError, Result};
use crate::gtmodule::{
    gamma_of, weight_of, Generator, LinearCombination, ModuleSpec,
};
use crate::qcoeff::{Context, ExtendedExponent, Mode};
use crate::relations::{maximal_set, standard_set, RelationSet};
use crate::tableaux::{Entry, Tableau};

/// Deliberate perturbation of the raising action, used to confirm that the
/// relation checks actually detect wrong coefficients.
#[derive(Debug, Clone, Copy)]
pub struct Fault {
    pub e_index: usize,
}

/// A module's generator action, optionally perturbed by a [`Fault`].
pub struct Operator<'a> {
    pub spec: &'a ModuleSpec,
    pub fault: Option<Fault>,
}

impl<'a> Operator<'a> {
    pub fn plain(spec: &'a ModuleSpec) -> Self {
        Operator { spec, fault: None }
    }

    pub fn apply(&self, gen: Generator, t: &Tableau) -> Result<LinearCombination> {
        let mut lc = self.spec.apply(gen, t)?;
        if let Some(f) = self.fault {
            if gen == Generator::E(f.e_index) {
                let ctx = &self.spec.ctx;
                match lc.terms.keys().next().cloned() {
                    Some(first) => {
                        let c = lc.terms.get(&first).unwrap().clone();
                        lc.terms.insert(first, ctx.add(&c, &ctx.one()));
                    }
                    None => lc.insert(ctx, t.clone(), ctx.one()),
                }
            }
        }
        Ok(lc)
    }

    pub fn apply_lc(&self, gen: Generator, lc: &LinearCombination) -> Result<LinearCombination> {
        let ctx = &self.spec.ctx;
        let mut out = LinearCombination::new();
        for (t, c) in &lc.terms {
            let image = self.apply(gen, t)?;
            for (t2, c2) in &image.terms {
                out.insert(ctx, t2.clone(), ctx.mul(c, c2));
            }
        }
        Ok(out)
    }
}

/// One verification line: named check, pass flag, worst numeric residual
/// (0 for exact checks), and a human-readable witness on failure.
#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub pass: bool,
    pub max_residual: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub mode: String,
    pub basis_size: usize,
    pub complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numeric_seed: Option<u64>,
    pub checks: Vec<CheckLine>,
    pub pass: bool,
}

impl std::fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "mode={} basis={}{}{}",
            self.mode,
            self.basis_size,
            if self.complete { " (complete)" } else { " (windowed)" },
            match self.numeric_seed {
                Some(s) => format!(" seed={s}"),
                None => String::new(),
            }
        )?;
        for c in &self.checks {
            writeln!(
                f,
                "{} {} (max residual {:.3e}){}",
                if c.pass { "PASS" } else { "FAIL" },
                c.name,
                c.max_residual,
                if c.detail.is_empty() {
                    String::new()
                } else {
                    format!(" -- {}", c.detail)
                }
            )?;
        }
        write!(f, "overall: {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Accumulated outcome of one check family over all basis tableaux.
#[derive(Debug, Clone)]
struct Outcome {
    pass: bool,
    residual: f64,
    detail: String,
}

impl Outcome {
    fn ok() -> Self {
        Outcome {
            pass: true,
            residual: 0.0,
            detail: String::new(),
        }
    }

    fn merge(mut self, other: Outcome) -> Self {
        if self.pass && !other.pass {
            self.detail = other.detail;
        }
        self.pass &= other.pass;
        self.residual = self.residual.max(other.residual);
        self
    }
}

fn compare(
    ctx: &Context,
    lhs: &LinearCombination,
    rhs: &LinearCombination,
    what: impl Fn() -> String,
) -> Outcome {
    match ctx.mode() {
        Mode::Exact => {
            let pass = lhs.eq(ctx, rhs);
            Outcome {
                pass,
                residual: 0.0,
                detail: if pass { String::new() } else { what() },
            }
        }
        Mode::Numeric => {
            let r = lhs.residual(ctx, rhs);
            let pass = r <= ctx.tolerance();
            Outcome {
                pass,
                residual: r,
                detail: if pass { String::new() } else { what() },
            }
        }
    }
}

const CHECKS: [&str; 5] = [
    "weight-invertibility",
    "weight-shift",
    "commutator",
    "serre",
    "distant-commutation",
];

/// Check the defining relations on every tableau of `basis`. The five
/// families: invertibility of the weight generators, the weight shift of
/// `e_k`/`f_k` images, the `[e_i, f_j]` commutator, the cubic relations
/// for adjacent indices, and commutation for distant indices.
pub fn check_defining_relations(
    op: &Operator<'_>,
    basis: &[Tableau],
) -> Result<Vec<CheckLine>> {
    let per_tableau: Vec<[Outcome; 5]> = basis
        .par_iter()
        .map(|t| check_one(op, t))
        .collect::<Result<_>>()?;
    let mut merged: Vec<Outcome> = (0..5).map(|_| Outcome::ok()).collect();
    for row in per_tableau {
        for (acc, o) in merged.iter_mut().zip(row) {
            *acc = acc.clone().merge(o);
        }
    }
    Ok(CHECKS
        .iter()
        .zip(merged)
        .map(|(name, o)| CheckLine {
            name: name.to_string(),
            pass: o.pass,
            max_residual: o.residual,
            detail: o.detail,
        })
        .collect())
}

fn check_one(op: &Operator<'_>, t: &Tableau) -> Result<[Outcome; 5]> {
    let spec = op.spec;
    let ctx = &spec.ctx;
    let n = spec.n();
    let w = weight_of(t);

    // weight generators are invertible and commute (diagonal action)
    let mut inv = Outcome::ok();
    for a in &w.a {
        let prod = ctx.mul(&ctx.q_pow(a)?, &ctx.q_pow(&a.neg())?);
        let lhs = LinearCombination::single(ctx, t.clone(), prod);
        let rhs = LinearCombination::single(ctx, t.clone(), ctx.one());
        inv = inv.merge(compare(ctx, &lhs, &rhs, || {
            format!("q^a q^-a != 1 at {t}")
        }));
    }

    // e_k raises eps_k and lowers eps_{k+1}; f_k does the opposite
    let mut shift = Outcome::ok();
    for k in 1..n {
        for (raising, image) in [(true, spec.act_e(k, t)?), (false, spec.act_f(k, t)?)] {
            for target in image.terms.keys() {
                let wt = weight_of(target);
                for i in 1..=n {
                    let mut expect = w.a[i - 1].clone();
                    let delta = if i == k { 1 } else if i == k + 1 { -1 } else { 0 };
                    let delta = if raising { delta } else { -delta };
                    expect = expect.add(&ExtendedExponent::from_int(delta));
                    if wt.a[i - 1] != expect {
                        shift = shift.merge(Outcome {
                            pass: false,
                            residual: 0.0,
                            detail: format!(
                                "weight exponent a_{i} wrong on {} in image of {}",
                                target,
                                if raising { "e" } else { "f" }
                            ),
                        });
                    }
                }
            }
        }
    }

    // [e_i, f_j] = delta_ij [a_i - a_{i+1}]_q
    let mut comm = Outcome::ok();
    for i in 1..n {
        for j in 1..n {
            let ef = op.apply_lc(Generator::E(i), &op.apply(Generator::F(j), t)?)?;
            let mut fe = op.apply_lc(Generator::F(j), &op.apply(Generator::E(i), t)?)?;
            if i == j {
                let alpha = w.alpha(i);
                fe.insert(ctx, t.clone(), ctx.q_number(&alpha)?);
            }
            // compared as e_i f_j = f_j e_i + delta_ij [alpha_i]_q, keeping
            // both sides at full magnitude so numeric residuals stay relative
            comm = comm.merge(compare(ctx, &ef, &fe, || {
                format!("[e_{i}, f_{j}] wrong at {t}")
            }));
        }
    }

    // e_i^2 e_j - (q + q^-1) e_i e_j e_i + e_j e_i^2 = 0 for |i-j| = 1
    let mut serre = Outcome::ok();
    let two = ctx.q_number(&ExtendedExponent::from_int(2))?;
    for i in 1..n {
        for j in 1..n {
            if i.abs_diff(j) != 1 {
                continue;
            }
            for make in [Generator::E as fn(usize) -> Generator, Generator::F] {
                let (gi, gj) = (make(i), make(j));
                let a = op.apply_lc(gi, &op.apply_lc(gi, &op.apply(gj, t)?)?)?;
                let b = op.apply_lc(gi, &op.apply_lc(gj, &op.apply(gi, t)?)?)?;
                let c = op.apply_lc(gj, &op.apply_lc(gi, &op.apply(gi, t)?)?)?;
                // compared as a + c = (q + q^-1) b for the same reason
                serre = serre.merge(compare(ctx, &a.add(ctx, &c), &b.scale(ctx, &two), || {
                    format!("cubic relation ({gi},{gj}) fails at {t}")
                }));
            }
        }
    }

    // distant generators commute
    let mut distant = Outcome::ok();
    for i in 1..n {
        for j in i + 2..n {
            for make in [Generator::E as fn(usize) -> Generator, Generator::F] {
                let (gi, gj) = (make(i), make(j));
                let ab = op.apply_lc(gi, &op.apply(gj, t)?)?;
                let ba = op.apply_lc(gj, &op.apply(gi, t)?)?;
                distant = distant.merge(compare(ctx, &ab, &ba, || {
                    format!("[{gi}, {gj}] != 0 at {t}")
                }));
            }
        }
    }

    Ok([inv, shift, comm, serre, distant])
}

/// Distinctness of the Gelfand-Tsetlin eigenvalue tuples across the basis.
pub fn check_gamma_separation(spec: &ModuleSpec, basis: &[Tableau]) -> Result<CheckLine> {
    let ctx = &spec.ctx;
    let mut line = CheckLine {
        name: "gamma-separation".to_string(),
        pass: true,
        max_residual: 0.0,
        detail: String::new(),
    };
    match ctx.mode() {
        Mode::Exact => {
            // canonical strings are a faithful key for exact scalars
            let mut seen: std::collections::BTreeMap<String, &Tableau> = Default::default();
            for t in basis {
                let mut key = String::new();
                for m in 1..=spec.n() {
                    for k in 1..=m {
                        key.push_str(&ctx.scalar_string(&gamma_of(ctx, t, m, k)?));
                        key.push(';');
                    }
                }
                if let Some(prev) = seen.insert(key, t) {
                    line.pass = false;
                    line.detail = format!("identical eigenvalue tuples at {prev} and {t}");
                    return Ok(line);
                }
            }
        }
        Mode::Numeric => {
            let chars: Vec<_> = basis
                .par_iter()
                .map(|t| spec.gt_character(t))
                .collect::<Result<_>>()?;
            for (a, ta) in chars.iter().zip(basis) {
                for (b, tb) in chars.iter().zip(basis) {
                    if std::ptr::eq(a, b) {
                        continue;
                    }
                    if a.eq(ctx, b) {
                        line.pass = false;
                        line.detail =
                            format!("identical eigenvalue tuples at {ta} and {tb}");
                        return Ok(line);
                    }
                }
            }
        }
    }
    Ok(line)
}

/// Full verification: enumerate the basis within `radius`, check the
/// defining relations and eigenvalue separation, and summarize.
pub fn verify_module(
    spec: &ModuleSpec,
    radius: i64,
    fault: Option<Fault>,
) -> Result<VerificationReport> {
    let basis = spec.enumerate_basis(radius)?;
    let op = Operator { spec, fault };
    let mut checks = check_defining_relations(&op, &basis.tableaux)?;
    checks.push(check_gamma_separation(spec, &basis.tableaux)?);
    let pass = checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        mode: match spec.ctx.mode() {
            Mode::Exact => "exact".to_string(),
            Mode::Numeric => "numeric".to_string(),
        },
        basis_size: basis.tableaux.len(),
        complete: basis.complete,
        numeric_seed: match spec.ctx.mode() {
            Mode::Numeric => Some(spec.ctx.numeric_config().seed),
            Mode::Exact => None,
        },
        checks,
        pass,
    })
}

/// All raising operators annihilate the tableau.
pub fn is_highest_weight_vector(spec: &ModuleSpec, t: &Tableau) -> Result<bool> {
    for k in 1..spec.n() {
        if !spec.act_e(k, t)?.terms.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Irreducibility criterion: the relation set must imply every repertoire
/// relation the seed satisfies. Pair-level so that strictly weaker sets
/// (which the seed may not fully satisfy in the component sense) can still
/// be tested.
pub fn irreducible(relations: &RelationSet, seed: &Tableau) -> Result<bool> {
    let (maximal, _) = maximal_set(seed)?;
    Ok(relations.implies(&maximal))
}

pub fn is_irreducible(spec: &ModuleSpec) -> Result<bool> {
    irreducible(&spec.relations, &spec.seed)
}

/// Dimension of the irreducible highest-weight module with dominant
/// integral weight `lambda`: `prod_{i<j} (l_i - l_j + j - i) / (j - i)`.
pub fn weyl_dimension(lambda: &[i64]) -> Result<BigInt> {
    if lambda.is_empty() || lambda.windows(2).any(|w| w[0] < w[1]) {
        return Err(QgtError::NonDominantWeight(format!("{lambda:?}")));
    }
    let n = lambda.len();
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    for i in 0..n {
        for j in i + 1..n {
            num *= BigInt::from(lambda[i] - lambda[j] + (j as i64) - (i as i64));
            den *= BigInt::from((j as i64) - (i as i64));
        }
    }
    Ok(num / den)
}

/// The standard-relation module whose seed is the lowest standard tableau
/// for `lambda`: row `k` entry `i` is `lambda_{i+n-k} - i`.
pub fn standard_module_spec(lambda: &[i64]) -> Result<ModuleSpec> {
    weyl_dimension(lambda)?;
    let n = lambda.len();
    if n < 2 {
        return Err(QgtError::InvalidInput(
            "need a weight of length at least 2".into(),
        ));
    }
    let mut rows = Vec::with_capacity(n);
    for k in (1..=n).rev() {
        let row: Vec<Entry> = (1..=k)
            .map(|i| Entry::int(lambda[i + n - k - 1] - i as i64))
            .collect();
        rows.push(row);
    }
    let seed = Tableau::new(n, 1, rows)?;
    ModuleSpec::new(standard_set(n), seed, Mode::Exact, None, false)
}

/// A numeric-mode seed for an arbitrary admissible set: entries of `base`
/// are tagged with one generic block per connected component (fresh blocks
/// for positions outside the relation graph), so entries constrained
/// together stay integrally comparable while unrelated ones become generic.
pub fn generic_seed_for(relations: &RelationSet, base: &Tableau) -> Result<Tableau> {
    if relations.n != base.n {
        return Err(QgtError::InvalidInput(format!(
            "relation set height {} != tableau height {}",
            relations.n, base.n
        )));
    }
    let comps = relations.components();
    let mut tagged = base.clone();
    let mut fresh = 0usize;
    for k in 1..=base.n {
        for i in 1..=k {
            let pos = crate::relations::Pos(k, i);
            let name = match comps.iter().position(|c| c.contains(&pos)) {
                Some(ci) => format!("z{ci}"),
                None => {
                    fresh += 1;
                    format!("w{fresh}")
                }
            };
            tagged.entry_mut(k, i).block = Some(name);
        }
    }
    Ok(tagged)
}
