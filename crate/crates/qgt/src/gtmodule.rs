//! Explicit module construction: basis enumeration over the shift lattice
//! of a seed tableau, the tableau formulas for the generator actions, the
//! weight exponents, the Gelfand-Tsetlin eigenvalues, and sparse operator
//! matrices.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{QgtError, Result};
use crate::qcoeff::{Context, ExtendedExponent, Mode, NumericConfig, Scalar};
use crate::relations::{Pos, RelationSet};
use crate::tableaux::{ShiftVector, Tableau};

/// On-disk form of a module specification.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleSpecFile {
    pub relations: RelationSet,
    pub seed: Tableau,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub numeric: Option<NumericConfig>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub unchecked: bool,
}

/// A validated `(relation set, seed tableau)` pair together with the
/// arithmetic context for the module it spans.
#[derive(Debug, Clone)]
pub struct ModuleSpec {
    pub relations: RelationSet,
    pub seed: Tableau,
    pub ctx: Context,
    /// Whether the relation set passed the admissibility check. Only
    /// `unchecked` construction admits inadmissible sets.
    pub admissible: bool,
}

impl ModuleSpec {
    pub fn new(
        relations: RelationSet,
        seed: Tableau,
        mode: Mode,
        numeric: Option<NumericConfig>,
        unchecked: bool,
    ) -> Result<Self> {
        relations.validate()?;
        seed.validate()?;
        if relations.n != seed.n {
            return Err(QgtError::InvalidInput(format!(
                "relation set height {} != tableau height {}",
                relations.n, seed.n
            )));
        }
        let report = relations.is_admissible()?;
        if !report.admissible && !unchecked {
            let first = &report.failures[0];
            return Err(QgtError::NotAdmissible(format!(
                "{:?}: {}",
                first.code, first.witness
            )));
        }
        if !seed.satisfies_set(&relations) {
            let witness = relations
                .relations
                .iter()
                .find(|rel| !seed.satisfies_relation(rel))
                .map(|rel| format!("relation {rel} fails on {seed}"))
                .unwrap_or_else(|| {
                    format!("comparable same-row entries of {seed} span different components")
                });
            return Err(QgtError::SeedViolatesRelations(witness));
        }
        let blocks = seed.block_names();
        let ctx = match mode {
            Mode::Exact => {
                if !blocks.is_empty() {
                    return Err(QgtError::NumericModeRequired(format!(
                        "seed carries generic blocks {blocks:?}"
                    )));
                }
                Context::exact(seed.root_degree)
            }
            Mode::Numeric => Context::numeric(
                seed.root_degree,
                numeric.unwrap_or_default(),
                &blocks,
            ),
        };
        Ok(ModuleSpec {
            relations,
            seed,
            ctx,
            admissible: report.admissible,
        })
    }

    pub fn from_file(file: ModuleSpecFile) -> Result<Self> {
        ModuleSpec::new(
            file.relations,
            file.seed,
            file.mode,
            file.numeric,
            file.unchecked,
        )
    }

    pub fn n(&self) -> usize {
        self.seed.n
    }

    /// Membership in the basis: integer shift of the seed with equal top
    /// row, satisfying the relation set. Non-lattice tableaux are errors.
    pub fn member(&self, t: &Tableau) -> Result<bool> {
        t.shift_from(&self.seed)?;
        Ok(t.satisfies_set(&self.relations))
    }

    /// Membership for tableaux already known to lie in the lattice.
    fn member_unchecked(&self, t: &Tableau) -> bool {
        t.satisfies_set(&self.relations)
    }

    /// Breadth-first enumeration of basis members whose shift from the
    /// seed has max-norm at most `radius`. The result is flagged complete
    /// when no member sits on the radius boundary, in which case the basis
    /// is finite and fully listed.
    pub fn enumerate_basis(&self, radius: i64) -> Result<BasisEnumeration> {
        if radius < 0 {
            return Err(QgtError::InvalidInput("radius must be >= 0".into()));
        }
        let n = self.n();
        let positions = ShiftVector::positions(n);
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut accepted: BTreeMap<Vec<i64>, Tableau> = BTreeMap::new();
        let mut queue = VecDeque::new();
        let origin = vec![0i64; positions.len()];
        seen.insert(origin.clone());
        queue.push_back(origin.clone());
        let mut on_boundary = false;
        while let Some(coords) = queue.pop_front() {
            let shift = shift_from_coords(n, &positions, &coords);
            let t = self.seed.shift(&shift);
            if !self.member_unchecked(&t) {
                continue;
            }
            if coords.iter().any(|c| c.abs() == radius) {
                on_boundary = true;
            }
            accepted.insert(coords.clone(), t);
            for (idx, _) in positions.iter().enumerate() {
                for step in [-1i64, 1] {
                    let mut next = coords.clone();
                    next[idx] += step;
                    if next[idx].abs() > radius || seen.contains(&next) {
                        continue;
                    }
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(BasisEnumeration {
            tableaux: accepted.into_values().collect(),
            complete: !on_boundary,
        })
    }

    /// Raising action: the tableau formula
    /// `e_k T = -sum_j (prod_i [l_{k+1,i} - l_{k,j}]_q / prod_{i != j} [l_{k,i} - l_{k,j}]_q) T(+delta^{kj})`
    /// with terms kept only when the shifted tableau stays in the basis.
    pub fn act_e(&self, k: usize, t: &Tableau) -> Result<LinearCombination> {
        self.act(k, t, true)
    }

    /// Lowering action, with shift `-delta^{kj}` and numerator running
    /// over row `k-1`. Empty products are one.
    pub fn act_f(&self, k: usize, t: &Tableau) -> Result<LinearCombination> {
        self.act(k, t, false)
    }

    fn act(&self, k: usize, t: &Tableau, raising: bool) -> Result<LinearCombination> {
        let n = self.n();
        if k == 0 || k >= n {
            return Err(QgtError::InvalidInput(format!(
                "generator index {k} out of range for height {n}"
            )));
        }
        if !self.member(t)? {
            return Err(QgtError::InvalidInput(format!(
                "tableau {t} is not a basis member"
            )));
        }
        let ctx = &self.ctx;
        let mut out = LinearCombination::new();
        for j in 1..=k {
            let unit = ShiftVector::unit(n, Pos(k, j));
            let shift = if raising { unit } else { unit.scaled(-1) };
            let target = t.shift(&shift);
            if !self.member_unchecked(&target) {
                continue;
            }
            let mut num = ctx.one();
            if raising {
                for i in 1..=k + 1 {
                    let d = t.diff(Pos(k + 1, i), Pos(k, j));
                    num = ctx.mul(&num, &ctx.q_number(&d)?);
                }
            } else {
                for i in 1..k {
                    let d = t.diff(Pos(k - 1, i), Pos(k, j));
                    num = ctx.mul(&num, &ctx.q_number(&d)?);
                }
            }
            let mut den = ctx.one();
            for i in 1..=k {
                if i == j {
                    continue;
                }
                let d = t.diff(Pos(k, i), Pos(k, j));
                let factor = ctx.q_number(&d)?;
                if ctx.is_zero(&factor) {
                    return Err(QgtError::DegenerateModule {
                        k,
                        i,
                        j,
                        tableau: t.to_string(),
                    });
                }
                den = ctx.mul(&den, &factor);
            }
            let mut coeff = ctx.div(&num, &den)?;
            if raising {
                coeff = ctx.neg(&coeff);
            }
            out.insert(ctx, target, coeff);
        }
        Ok(out)
    }

    /// Weight exponents `a_k = sum_i l_{k,i} - sum_i l_{k-1,i} + k`; the
    /// eigenvalue of `q^{eps_k}` is `q^{a_k}`.
    pub fn weight(&self, t: &Tableau) -> WeightExponent {
        weight_of(t)
    }

    /// Gelfand-Tsetlin eigenvalue for the `(m,k)` generator.
    pub fn gamma(&self, t: &Tableau, m: usize, k: usize) -> Result<Scalar> {
        gamma_of(&self.ctx, t, m, k)
    }

    pub fn gt_character(&self, t: &Tableau) -> Result<GTCharacter> {
        let mut values = BTreeMap::new();
        for m in 1..=self.n() {
            for k in 1..=m {
                values.insert((m, k), self.gamma(t, m, k)?);
            }
        }
        Ok(GTCharacter { values })
    }

    pub fn apply(&self, gen: Generator, t: &Tableau) -> Result<LinearCombination> {
        match gen {
            Generator::E(k) => self.act_e(k, t),
            Generator::F(k) => self.act_f(k, t),
            Generator::QEps(k, inverse) => {
                let n = self.n();
                if k == 0 || k > n {
                    return Err(QgtError::InvalidInput(format!(
                        "weight generator index {k} out of range for height {n}"
                    )));
                }
                let a = weight_of(t).a[k - 1].clone();
                let exp = if inverse { a.neg() } else { a };
                let coeff = self.ctx.q_pow(&exp)?;
                let mut lc = LinearCombination::new();
                lc.insert(&self.ctx, t.clone(), coeff);
                Ok(lc)
            }
        }
    }

    /// Linear extension of a generator to a combination of tableaux.
    pub fn apply_lc(&self, gen: Generator, lc: &LinearCombination) -> Result<LinearCombination> {
        let mut out = LinearCombination::new();
        for (t, c) in &lc.terms {
            let image = self.apply(gen, t)?;
            for (t2, c2) in &image.terms {
                out.insert(&self.ctx, t2.clone(), self.ctx.mul(c, c2));
            }
        }
        Ok(out)
    }

    /// Assemble the sparse matrix of a generator on an ordered basis.
    /// Column `c` holds the coefficients of the image of basis vector `c`.
    pub fn matrix(&self, gen: Generator, basis: &[Tableau]) -> Result<SparseMatrix> {
        let index: BTreeMap<&Tableau, usize> =
            basis.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let mut entries = Vec::new();
        let mut boundary_leak = false;
        for (col, t) in basis.iter().enumerate() {
            let image = self.apply(gen, t)?;
            for (t2, c) in &image.terms {
                match index.get(t2) {
                    Some(&row) => entries.push((row + 1, col + 1, self.ctx.scalar_string(c))),
                    None => boundary_leak = true,
                }
            }
        }
        entries.sort();
        Ok(SparseMatrix {
            root_degree: self.ctx.root_degree(),
            rows: basis.len(),
            cols: basis.len(),
            entries,
            boundary_leak,
        })
    }
}

/// Basis members inside a max-norm window, in lexicographic shift order.
#[derive(Debug, Clone)]
pub struct BasisEnumeration {
    pub tableaux: Vec<Tableau>,
    /// True when no member touches the window boundary, so the whole
    /// (finite) basis is listed.
    pub complete: bool,
}

fn shift_from_coords(n: usize, positions: &[Pos], coords: &[i64]) -> ShiftVector {
    let mut z = ShiftVector::zero(n);
    for (p, &c) in positions.iter().zip(coords) {
        if c != 0 {
            z.z.insert(*p, c);
        }
    }
    z
}

/// Weight exponents independent of any module context.
pub fn weight_of(t: &Tableau) -> WeightExponent {
    let mut a = Vec::with_capacity(t.n);
    for k in 1..=t.n {
        let mut acc = ExtendedExponent::from_int(k as i64);
        for i in 1..=k {
            acc = acc.add(&t.entry(k, i).exponent());
        }
        if k > 1 {
            for i in 1..k {
                acc = acc.sub(&t.entry(k - 1, i).exponent());
            }
        }
        a.push(acc);
    }
    WeightExponent { a }
}

/// `gamma_mk = (k)_{q^-2}! (m-k)_{q^-2}! q^{k(k+1)+m(m-3)/2} *
///  sum_shuffles q^{sum_in - sum_out}` over the `C(m,k)` shuffles of row `m`.
pub fn gamma_of(ctx: &Context, t: &Tableau, m: usize, k: usize) -> Result<Scalar> {
    if !(1 <= k && k <= m && m <= t.n) {
        return Err(QgtError::InvalidInput(format!(
            "gamma indices (m,k) = ({m},{k}) out of range"
        )));
    }
    // k(k+1) + m(m-3)/2 is an integer: m(m-3) is always even.
    let power = (k * (k + 1)) as i64 + (m as i64) * (m as i64 - 3) / 2;
    let mut prefactor = ctx.mul(&ctx.q_paren_factorial(k), &ctx.q_paren_factorial(m - k));
    prefactor = ctx.mul(
        &prefactor,
        &ctx.q_pow(&ExtendedExponent::from_int(power))?,
    );
    let mut sum = ctx.zero();
    for subset in combinations(m, k) {
        let mut exp = ExtendedExponent::default();
        for i in 1..=m {
            let e = t.entry(m, i).exponent();
            if subset.contains(&i) {
                exp = exp.add(&e);
            } else {
                exp = exp.sub(&e);
            }
        }
        sum = ctx.add(&sum, &ctx.q_pow(&exp)?);
    }
    Ok(ctx.mul(&prefactor, &sum))
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fn rec(start: usize, m: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..=m {
            current.push(i);
            rec(i + 1, m, k, current, out);
            current.pop();
        }
    }
    rec(1, m, k, &mut current, &mut out);
    out
}

/// Finite formal sum of tableaux with scalar coefficients; zero
/// coefficients are never stored.
#[derive(Debug, Clone, Default)]
pub struct LinearCombination {
    pub terms: BTreeMap<Tableau, Scalar>,
}

impl LinearCombination {
    pub fn new() -> Self {
        LinearCombination::default()
    }

    pub fn single(ctx: &Context, t: Tableau, c: Scalar) -> Self {
        let mut lc = LinearCombination::new();
        lc.insert(ctx, t, c);
        lc
    }

    pub fn insert(&mut self, ctx: &Context, t: Tableau, c: Scalar) {
        let entry = match self.terms.remove(&t) {
            Some(existing) => ctx.add(&existing, &c),
            None => c,
        };
        if !ctx.is_zero(&entry) {
            self.terms.insert(t, entry);
        }
    }

    pub fn add(&self, ctx: &Context, other: &LinearCombination) -> LinearCombination {
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.insert(ctx, t.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, ctx: &Context, c: &Scalar) -> LinearCombination {
        let mut out = LinearCombination::new();
        for (t, v) in &self.terms {
            out.insert(ctx, t.clone(), ctx.mul(v, c));
        }
        out
    }

    pub fn neg(&self, ctx: &Context) -> LinearCombination {
        let mut out = LinearCombination::new();
        for (t, v) in &self.terms {
            out.insert(ctx, t.clone(), ctx.neg(v));
        }
        out
    }

    pub fn sub(&self, ctx: &Context, other: &LinearCombination) -> LinearCombination {
        self.add(ctx, &other.neg(ctx))
    }

    pub fn is_zero(&self, ctx: &Context) -> bool {
        self.terms.values().all(|c| ctx.is_zero(c))
    }

    pub fn eq(&self, ctx: &Context, other: &LinearCombination) -> bool {
        self.sub(ctx, other).is_zero(ctx)
    }

    /// Max relative residual between two combinations, coefficient-wise
    /// over the union of their supports.
    pub fn residual(&self, ctx: &Context, other: &LinearCombination) -> f64 {
        let mut keys: BTreeSet<&Tableau> = self.terms.keys().collect();
        keys.extend(other.terms.keys());
        let zero = ctx.zero();
        keys.into_iter()
            .map(|t| {
                let a = self.terms.get(t).unwrap_or(&zero);
                let b = other.terms.get(t).unwrap_or(&zero);
                ctx.residual(a, b)
            })
            .fold(0.0, f64::max)
    }

    pub fn to_json(&self, ctx: &Context) -> serde_json::Value {
        let map: BTreeMap<String, String> = self
            .terms
            .iter()
            .map(|(t, c)| (t.to_string(), ctx.scalar_string(c)))
            .collect();
        serde_json::json!(map)
    }
}

/// Weight exponents `a_1, ..., a_n` of a tableau.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightExponent {
    pub a: Vec<ExtendedExponent>,
}

impl WeightExponent {
    /// `a_k - a_{k+1}`, the exponent of `q^{alpha_k}`.
    pub fn alpha(&self, k: usize) -> ExtendedExponent {
        self.a[k - 1].sub(&self.a[k])
    }
}

/// The tuple of Gelfand-Tsetlin eigenvalues at one tableau; the fingerprint
/// of the corresponding maximal ideal of the Gelfand-Tsetlin subalgebra.
#[derive(Debug, Clone)]
pub struct GTCharacter {
    pub values: BTreeMap<(usize, usize), Scalar>,
}

impl GTCharacter {
    /// Scale-free comparison: eigenvalues span enormous magnitude ranges,
    /// so equality is decided relative to the values themselves.
    pub fn eq(&self, ctx: &Context, other: &GTCharacter) -> bool {
        self.values.len() == other.values.len()
            && self
                .values
                .iter()
                .all(|(mk, v)| other.values.get(mk).is_some_and(|w| ctx.eq_relative(v, w)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Generator {
    E(usize),
    F(usize),
    /// `q^{eps_k}`, or its inverse when the flag is set.
    QEps(usize, bool),
}

impl Generator {
    pub fn parse(s: &str) -> Result<Generator> {
        let err = || QgtError::InvalidInput(format!("unknown generator `{s}`"));
        if let Some(rest) = s.strip_prefix("qeps") {
            let (rest, inv) = match rest.strip_suffix("inv") {
                Some(r) => (r, true),
                None => (rest, false),
            };
            return rest
                .parse::<usize>()
                .map(|k| Generator::QEps(k, inv))
                .map_err(|_| err());
        }
        if let Some(rest) = s.strip_prefix('e') {
            return rest.parse::<usize>().map(Generator::E).map_err(|_| err());
        }
        if let Some(rest) = s.strip_prefix('f') {
            return rest.parse::<usize>().map(Generator::F).map_err(|_| err());
        }
        Err(err())
    }
}

impl std::fmt::Display for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Generator::E(k) => write!(f, "e{k}"),
            Generator::F(k) => write!(f, "f{k}"),
            Generator::QEps(k, false) => write!(f, "qeps{k}"),
            Generator::QEps(k, true) => write!(f, "qeps{k}inv"),
        }
    }
}

/// Column-assembled operator matrix in coordinate text form.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    pub root_degree: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, String)>,
    pub boundary_leak: bool,
}

impl SparseMatrix {
    /// Text form: header `qgt-matrix <D> <rows> <cols> <nnz>` followed by
    /// 1-based `i j <scalar>` lines in row-major order.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "qgt-matrix {} {} {} {}\n",
            self.root_degree,
            self.rows,
            self.cols,
            self.entries.len()
        );
        for (i, j, s) in &self.entries {
            out.push_str(&format!("{i} {j} {s}\n"));
        }
        out
    }
}
