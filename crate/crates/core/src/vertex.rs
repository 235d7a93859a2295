//! Vertex functions and descendant insertions.
//!
//! Two independent routes compute the bare vertex function: the product
//! over boxes of q-Pochhammer chains, and the equivariant-localization sum
//! over degree tuples. Descendant insertions are realized either by
//! evaluating tautological classes at the fixed points inside the
//! localization sum, or by applying the commuting q-difference operators
//! to the product form; agreement of the two is the content of the main
//! identity checked by the test suites.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partitions::{format_cell_address, BoxMonomial, Cell, Partition, ShiftDescriptor};
use crate::qseries::{
    elementary_symmetric_rational, pochhammer_ext, Mono, PochFactor, Rational,
    SpecializationContext, TruncatedSeries, VarRange,
};

pub fn beta(node: i32) -> i64 {
    if node < 0 {
        (-node) as i64
    } else {
        0
    }
}

// ---------------------------------------------------------------------------
// Descendant polynomials
// ---------------------------------------------------------------------------

/// Integer-coefficient polynomial in the generators g_{n,r} = Λ^r V_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescendantPolynomial {
    /// (coefficient, monomial); a monomial is a sorted list of (node, rank)
    /// factors with repetition.
    terms: Vec<(i64, Vec<(i32, u32)>)>,
}

impl DescendantPolynomial {
    pub fn unit() -> Self {
        DescendantPolynomial {
            terms: vec![(1, Vec::new())],
        }
    }

    pub fn generator(node: i32, rank: u32) -> Self {
        DescendantPolynomial {
            terms: vec![(1, vec![(node, rank)])],
        }
    }

    pub fn from_terms(terms: Vec<(i64, Vec<(i32, u32)>)>) -> Self {
        let mut t = terms;
        for (_, m) in &mut t {
            m.sort();
        }
        DescendantPolynomial { terms: t }
    }

    pub fn terms(&self) -> &[(i64, Vec<(i32, u32)>)] {
        &self.terms
    }

    pub fn mul(&self, other: &DescendantPolynomial) -> DescendantPolynomial {
        let mut out = Vec::new();
        for (ca, ma) in &self.terms {
            for (cb, mb) in &other.terms {
                let mut m = ma.clone();
                m.extend_from_slice(mb);
                m.sort();
                out.push((ca * cb, m));
            }
        }
        DescendantPolynomial { terms: out }
    }

    pub fn add(&self, other: &DescendantPolynomial) -> DescendantPolynomial {
        let mut t = self.terms.clone();
        t.extend_from_slice(&other.terms);
        DescendantPolynomial { terms: t }
    }
}

// ---------------------------------------------------------------------------
// Product form
// ---------------------------------------------------------------------------

/// The bare vertex function as the product over boxes of
/// ∏_{i≥0} (1 − ħ z_□ q^i)/(1 − z_□ q^i), truncated at total degree `cap`.
pub fn vertex_product(
    partition: &Partition,
    cap: u32,
    ctx: &SpecializationContext,
) -> Result<TruncatedSeries> {
    let range = partition.var_range();
    let mut acc = TruncatedSeries::one(range, cap);
    for cell in partition.cells() {
        acc = acc.mul(&box_factor_series(partition, cell, cap, ctx)?)?;
    }
    Ok(acc)
}

/// The single-box factor of the product form as a truncated series.
pub fn box_factor_series(
    partition: &Partition,
    cell: Cell,
    cap: u32,
    ctx: &SpecializationContext,
) -> Result<TruncatedSeries> {
    let m = partition.z_monomial(cell)?;
    let expo = m
        .unsigned_zexp()
        .expect("z-monomials of cells have nonnegative exponents");
    TruncatedSeries::pochhammer_chain(
        m.range(),
        cap,
        &expo,
        &m.specialized_scale(ctx),
        ctx,
    )
}

// ---------------------------------------------------------------------------
// Localization form
// ---------------------------------------------------------------------------

/// Degrees d_{i,j} ≥ 0 indexed by content i and slot j = 1..v_i.
pub type DegreeAssignment = BTreeMap<i32, Vec<u64>>;

fn zero_assignment(partition: &Partition) -> DegreeAssignment {
    let prof = partition.profile();
    (prof.lo()..=prof.hi())
        .map(|i| (i, vec![0u64; prof.count(i) as usize]))
        .collect()
}

/// All-zero degree assignment, one slot per cell.
pub fn empty_degrees(partition: &Partition) -> DegreeAssignment {
    zero_assignment(partition)
}

fn enumerate_assignments(
    template: &DegreeAssignment,
    budget: u64,
    frozen_below: Option<i32>,
) -> Vec<DegreeAssignment> {
    // flatten the mutable slots in content order
    let mut slots: Vec<(i32, usize)> = Vec::new();
    for (content, v) in template {
        if let Some(th) = frozen_below {
            if *content <= th {
                continue;
            }
        }
        for j in 0..v.len() {
            slots.push((*content, j));
        }
    }
    let mut out = Vec::new();
    let mut current = template.clone();
    fn rec(
        slots: &[(i32, usize)],
        idx: usize,
        left: u64,
        current: &mut DegreeAssignment,
        out: &mut Vec<DegreeAssignment>,
    ) {
        if idx == slots.len() {
            out.push(current.clone());
            return;
        }
        let (content, j) = slots[idx];
        for v in 0..=left {
            current.get_mut(&content).unwrap()[j] = v;
            rec(slots, idx + 1, left - v, current, out);
        }
        current.get_mut(&content).unwrap()[j] = 0;
    }
    rec(&slots, 0, budget, &mut current, &mut out);
    out
}

/// Weight of one fixed point: the product of φ-ratio blocks of the
/// localization sum. Blocks whose columns all lie at contents ≤ `threshold`
/// are skipped (used to isolate the part of the sum depending on the
/// columns to the right of a node); pass `None` to include everything.
fn term_weight(
    partition: &Partition,
    d: &DegreeAssignment,
    threshold: Option<i32>,
    ctx: &SpecializationContext,
) -> Result<Rational> {
    let prof = partition.profile();
    let lo = prof.lo();
    let hi = prof.hi();
    let included = |max_content: i32| -> bool {
        match threshold {
            Some(t) => max_content > t,
            None => true,
        }
    };
    let dval = |i: i32, j: usize| -> i64 { d[&i][j] as i64 };
    let mut acc = PochFactor::one();
    // framing at node 0 (dimension 1)
    if included(0) {
        for j in 1..=prof.count(0) as i64 {
            let dj = dval(0, (j - 1) as usize);
            let num = pochhammer_ext(&ctx.hq_monomial(j, 0), dj, ctx);
            let den = pochhammer_ext(&ctx.hq_monomial(j - 1, 1), dj, ctx);
            acc.mul_assign(&num);
            acc.div_assign(&den);
        }
    }
    // arrows i → i+1
    for i in lo..hi {
        if !included(i + 1) {
            continue;
        }
        for j in 1..=prof.count(i) as i64 {
            for k in 1..=prof.count(i + 1) as i64 {
                let delta = dval(i + 1, (k - 1) as usize) - dval(i, (j - 1) as usize);
                let (a_num, a_den) = if i < 0 {
                    (k - j, k - j - 1)
                } else {
                    (k - j + 1, k - j)
                };
                let num = pochhammer_ext(&ctx.hq_monomial(a_num, 0), delta, ctx);
                let den = pochhammer_ext(&ctx.hq_monomial(a_den, 1), delta, ctx);
                acc.mul_assign(&num);
                acc.div_assign(&den);
            }
        }
    }
    // vector/adjoint factors at each node
    for i in lo..=hi {
        if !included(i) {
            continue;
        }
        let v = prof.count(i) as i64;
        for j in 1..=v {
            for k in 1..=v {
                if j == k {
                    continue;
                }
                let delta = dval(i, (k - 1) as usize) - dval(i, (j - 1) as usize);
                let num = pochhammer_ext(&ctx.hq_monomial(k - j, 1), delta, ctx);
                let den = pochhammer_ext(&ctx.hq_monomial(k - j + 1, 0), delta, ctx);
                acc.mul_assign(&num);
                acc.div_assign(&den);
            }
        }
    }
    acc.finish()
}

/// Value of a descendant polynomial at the fixed point with degrees `d`:
/// the generator g_{n,r} evaluates to ħ^{β(n)} e_r(ħ^{j−1} q^{d_{n,j}}).
fn descendant_value(
    partition: &Partition,
    tau: &DescendantPolynomial,
    d: &DegreeAssignment,
    ctx: &SpecializationContext,
) -> Rational {
    let prof = partition.profile();
    let mut total = Rational::zero();
    for (coeff, monomial) in tau.terms() {
        let mut val = Rational::from_integer((*coeff).into());
        for (node, rank) in monomial {
            let v = prof.count(*node) as i64;
            let roots: Vec<Rational> = (1..=v)
                .map(|j| {
                    let dj = d
                        .get(node)
                        .map(|col| col[(j - 1) as usize] as i64)
                        .unwrap_or(0);
                    ctx.hbar_pow(j - 1) * ctx.q_pow(dj)
                })
                .collect();
            val *= ctx.hbar_pow(beta(*node))
                * elementary_symmetric_rational(&roots, *rank as usize);
        }
        total += val;
    }
    total
}

/// Maps a series in the variables of the transpose diagram into the
/// variables of `partition` along the reflection of the content axis:
/// z'_i = (ħ/q)^{v_{−i−1} − v_{−i+1}} z_{−i} with v the profile of
/// `partition`. The bare vertex functions of a diagram and its transpose
/// correspond under this substitution.
pub fn transport_from_transpose(
    series: &TruncatedSeries,
    partition: &Partition,
    ctx: &SpecializationContext,
) -> TruncatedSeries {
    let range = partition.var_range();
    let prof = partition.profile();
    let rp = series.range();
    let mut out = TruncatedSeries::zero(range, series.cap());
    for (m, coeff) in series.iter() {
        let mut expo = vec![0u32; range.len()];
        let mut hqs = 0i64;
        for (idx, e) in m.0.iter().enumerate() {
            if *e == 0 {
                continue;
            }
            let i = rp.content(idx);
            let delta = prof.count(-i - 1) as i64 - prof.count(-i + 1) as i64;
            hqs += delta * (*e as i64);
            expo[range.index(-i).expect("mirrored content in range")] = *e;
        }
        out.insert_term(Mono(expo), coeff.clone() * ctx.hq_pow(hqs));
    }
    out
}

/// The bare vertex function from the localization sum, with an optional
/// descendant inserted at the fixed points via `descendant_value`.
pub fn vertex_localization_descendant(
    partition: &Partition,
    tau: Option<&DescendantPolynomial>,
    cap: u32,
    ctx: &SpecializationContext,
) -> Result<TruncatedSeries> {
    let range = partition.var_range();
    let mut out = TruncatedSeries::zero(range, cap);
    let template = zero_assignment(partition);
    for d in enumerate_assignments(&template, cap as u64, None) {
        let mut weight = term_weight(partition, &d, None, ctx)?;
        if weight.is_zero() {
            continue;
        }
        if let Some(tau) = tau {
            weight *= descendant_value(partition, tau, &d, ctx);
        }
        let expo: Vec<u32> = range
            .contents()
            .map(|i| d[&i].iter().sum::<u64>() as u32)
            .collect();
        out.insert_term(Mono(expo), weight);
    }
    Ok(out)
}

pub fn vertex_localization(
    partition: &Partition,
    cap: u32,
    ctx: &SpecializationContext,
) -> Result<TruncatedSeries> {
    vertex_localization_descendant(partition, None, cap, ctx)
}

/// Localization sum with an arbitrary per-fixed-point insertion.
pub fn localization_weighted(
    partition: &Partition,
    cap: u32,
    ctx: &SpecializationContext,
    insertion: &dyn Fn(&DegreeAssignment, &SpecializationContext) -> Rational,
) -> Result<TruncatedSeries> {
    let range = partition.var_range();
    let mut out = TruncatedSeries::zero(range, cap);
    let template = zero_assignment(partition);
    for d in enumerate_assignments(&template, cap as u64, None) {
        let weight = term_weight(partition, &d, None, ctx)?;
        if weight.is_zero() {
            continue;
        }
        let expo: Vec<u32> = range
            .contents()
            .map(|i| d[&i].iter().sum::<u64>() as u32)
            .collect();
        out.insert_term(Mono(expo), weight * insertion(&d, ctx));
    }
    Ok(out)
}

/// The part of the localization sum depending on the columns to the right
/// of `node`, with the remaining degrees frozen at `left`: a series in
/// z_{node+1}, ..., z_hi. Used to cross-check the flag-vertex factorization.
pub fn localization_right_sum(
    partition: &Partition,
    node: i32,
    left: &DegreeAssignment,
    cap: u32,
    ctx: &SpecializationContext,
) -> Result<TruncatedSeries> {
    let hi = partition.var_range().hi;
    if node >= hi || node < 0 {
        return Err(Error::InvalidArgument(
            "node must be a nonnegative content below the top".to_string(),
        ));
    }
    let range = VarRange::new(node + 1, hi);
    let mut out = TruncatedSeries::zero(range, cap);
    for d in enumerate_assignments(left, cap as u64, Some(node)) {
        let weight = term_weight(partition, &d, Some(node), ctx)?;
        if weight.is_zero() {
            continue;
        }
        let expo: Vec<u32> = range
            .contents()
            .map(|i| d[&i].iter().sum::<u64>() as u32)
            .collect();
        out.insert_term(Mono(expo), weight);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Redundant flag vertex
// ---------------------------------------------------------------------------

/// Vertex function of the redundant flag variety cut out of the diagram to
/// the right of `node` (node ≥ 0), restricted to the fixed point whose
/// tautological weights at every vertex are the leading equivariant
/// parameters. A series in z_{node+1}, ..., z_hi.
pub fn flag_vertex(
    partition: &Partition,
    node: i32,
    cap: u32,
    avals: &[Rational],
    ctx: &SpecializationContext,
) -> Result<TruncatedSeries> {
    let prof = partition.profile();
    let hi = prof.hi();
    if node < 0 || node > hi {
        return Err(Error::InvalidArgument(
            "flag vertex needs 0 ≤ node ≤ top content".to_string(),
        ));
    }
    if avals.len() != prof.count(node) as usize {
        return Err(Error::InvalidArgument(
            "need one equivariant parameter per box of the node".to_string(),
        ));
    }
    // With no columns to the right the flag is a point; keep a dummy
    // variable so operators can still act (they fix constants).
    let lo_f = (node + 1).min(hi);
    let range = VarRange::new(lo_f, hi);
    let mut out = TruncatedSeries::zero(range, cap);
    let template: DegreeAssignment = (node + 1..=hi)
        .map(|i| (i, vec![0u64; prof.count(i) as usize]))
        .collect();
    for f in enumerate_assignments(&template, cap as u64, None) {
        let mut acc = PochFactor::one();
        let fval = |i: i32, j: usize| -> i64 {
            f.get(&i).map(|col| col[j] as i64).unwrap_or(0)
        };
        // framing → first node
        if node < hi {
            for j in 1..=prof.count(node) as usize {
                for k in 1..=prof.count(node + 1) as usize {
                    let ratio = &avals[k - 1] / &avals[j - 1];
                    let delta = fval(node + 1, k - 1);
                    let num = pochhammer_ext(&(ctx.hbar().clone() * &ratio), delta, ctx);
                    let den = pochhammer_ext(&(ctx.q().clone() * &ratio), delta, ctx);
                    acc.mul_assign(&num);
                    acc.div_assign(&den);
                }
            }
        }
        // arrows between flag nodes
        for i in node + 1..hi {
            for j in 1..=prof.count(i) as usize {
                for k in 1..=prof.count(i + 1) as usize {
                    let ratio = &avals[k - 1] / &avals[j - 1];
                    let delta = fval(i + 1, k - 1) - fval(i, j - 1);
                    let num = pochhammer_ext(&(ctx.hbar().clone() * &ratio), delta, ctx);
                    let den = pochhammer_ext(&(ctx.q().clone() * &ratio), delta, ctx);
                    acc.mul_assign(&num);
                    acc.div_assign(&den);
                }
            }
        }
        // vector/adjoint factors at flag nodes
        for i in node + 1..=hi {
            let v = prof.count(i) as usize;
            for j in 1..=v {
                for k in 1..=v {
                    if j == k {
                        continue;
                    }
                    let ratio = &avals[k - 1] / &avals[j - 1];
                    let delta = fval(i, k - 1) - fval(i, j - 1);
                    let num = pochhammer_ext(&(ctx.q().clone() * &ratio), delta, ctx);
                    let den = pochhammer_ext(&(ctx.hbar().clone() * &ratio), delta, ctx);
                    acc.mul_assign(&num);
                    acc.div_assign(&den);
                }
            }
        }
        let weight = acc.finish()?;
        if weight.is_zero() {
            continue;
        }
        let expo: Vec<u32> = range
            .contents()
            .map(|i| f.get(&i).map(|col| col.iter().sum::<u64>()).unwrap_or(0) as u32)
            .collect();
        out.insert_term(Mono(expo), weight);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Macdonald difference operators
// ---------------------------------------------------------------------------

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    if r > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        // advance
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - r {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// The coefficient (ħ ζ_{□'} − ζ_□)/(ζ_{□'} − ζ_□) as a truncated series,
/// expanded in the zone where positive-degree monomials are small.
pub fn pair_factor_series(
    partition: &Partition,
    cell: Cell,
    other: Cell,
    range: VarRange,
    cap: u32,
    ctx: &SpecializationContext,
) -> Result<TruncatedSeries> {
    let u = partition.operator_pair_ratio(cell, other)?;
    expand_pair_factor(&u, range, cap, ctx)
}

fn expand_pair_factor(
    u: &BoxMonomial,
    range: VarRange,
    cap: u32,
    ctx: &SpecializationContext,
) -> Result<TruncatedSeries> {
    let deg = u.total_degree();
    if deg == 0 {
        return Err(Error::InvalidArgument(
            "pair of boxes with equal ζ-monomial".to_string(),
        ));
    }
    let restrict = |m: &BoxMonomial| -> Result<(Vec<u32>, Rational)> {
        // drop variables outside the target range; they never appear when
        // the ranges agree, and flag operators restrict to the flag range
        let mut expo = vec![0u32; range.len()];
        for (i, e) in m.range().contents().zip(m.zexp()) {
            if *e == 0 {
                continue;
            }
            match range.index(i) {
                Some(k) => {
                    expo[k] = u32::try_from(*e).map_err(|_| {
                        Error::InvalidArgument("negative exponent after normalization".to_string())
                    })?
                }
                None => {
                    return Err(Error::InvalidArgument(
                        "pair factor uses a variable outside the series range".to_string(),
                    ))
                }
            }
        }
        Ok((expo, m.specialized_scale(ctx)))
    };
    if deg > 0 {
        // (ħ − u) / (1 − u)
        let (expo, c) = restrict(u)?;
        let geom = TruncatedSeries::geometric_inverse(range, cap, &expo, &c)?;
        let hbar_part = geom.scale(ctx.hbar());
        let u_part = geom.mul(&TruncatedSeries::monomial(range, cap, &expo, c))?;
        hbar_part.sub(&u_part)
    } else {
        // (1 − ħ u^{-1}) / (1 − u^{-1})
        let w = u.inverse();
        let (expo, c) = restrict(&w)?;
        let geom = TruncatedSeries::geometric_inverse(range, cap, &expo, &c)?;
        let num =
            TruncatedSeries::binomial_factor(range, cap, &expo, &(ctx.hbar().clone() * &c));
        num.mul(&geom)
    }
}

/// Exact value of the pair coefficient at a rational z-point.
pub fn pair_factor_eval(
    partition: &Partition,
    cell: Cell,
    other: Cell,
    point: &[Rational],
    ctx: &SpecializationContext,
) -> Result<Rational> {
    let u = partition.operator_pair_ratio(cell, other)?.eval(point, ctx)?;
    let den = Rational::one() - &u;
    if den.is_zero() {
        return Err(Error::Pole(pair_name(cell, other)));
    }
    Ok((ctx.hbar().clone() - u) / den)
}

fn pair_name(cell: Cell, other: Cell) -> String {
    let mut s = String::from("pair factor ");
    s.push_str(&format_cell_address(cell));
    s.push('|');
    s.push_str(&format_cell_address(other));
    s
}

/// Applies the difference operator attached to (node, rank) to a series:
/// ħ^{r(r−1)/2+β(n)} Σ_{|I|=r} ∏ pair coefficients ∏_{□∈I} (ζ-shift of □),
/// the coefficients expanded in the zone where positive-degree monomials
/// are small. Operators at a common node commute; across nodes the
/// realized difference operators do not (the shift of a one-box node acts
/// on the other node's coefficients), so composite descendants must be
/// applied in ascending node order to match the fixed-point insertions.
pub fn macdonald_apply(
    partition: &Partition,
    node: i32,
    rank: u32,
    f: &TruncatedSeries,
    ctx: &SpecializationContext,
) -> Result<TruncatedSeries> {
    let cells = partition.cells_at_content(node);
    let v = cells.len();
    if v == 0 {
        return Err(Error::InvalidArgument("node outside the diagram".to_string()));
    }
    if rank == 0 || rank as usize > v {
        return Err(Error::InvalidArgument(
            "rank must lie between 1 and the node dimension".to_string(),
        ));
    }
    let range = f.range();
    let cap = f.cap();
    let descriptors: Vec<ShiftDescriptor> = cells
        .iter()
        .map(|c| partition.shift_descriptor(*c))
        .collect::<Result<_>>()?;
    let mut total = TruncatedSeries::zero(range, cap);
    for subset in combinations(v, rank as usize) {
        let mut coeff = TruncatedSeries::one(range, cap);
        for &i in &subset {
            for j in 0..v {
                if subset.contains(&j) {
                    continue;
                }
                let factor = pair_factor_series(partition, cells[i], cells[j], range, cap, ctx)?;
                coeff = coeff.mul(&factor)?;
            }
        }
        let chosen: Vec<&ShiftDescriptor> = subset.iter().map(|i| &descriptors[*i]).collect();
        let e = ShiftDescriptor::combine(&chosen, range);
        total = total.add(&coeff.mul(&f.q_shift(&e, ctx))?)?;
    }
    let r = rank as i64;
    Ok(total.scale(&ctx.hbar_pow(r * (r - 1) / 2 + beta(node))))
}

/// The flag-adapted operator: the subset sum with pair coefficients
/// (ħ − u)/(1 − u), per-box scalars a_{h(□)}/ħ^{h(□)−1}, the ζ-shifts of
/// the subset, and prefactor ħ^{r(r−1)/2}. With generic equivariant
/// parameters this family does not degenerate.
pub fn flag_operator_apply(
    partition: &Partition,
    node: i32,
    rank: u32,
    avals: &[Rational],
    f: &TruncatedSeries,
    ctx: &SpecializationContext,
) -> Result<TruncatedSeries> {
    let cells = partition.cells_at_content(node);
    let v = cells.len();
    if v == 0 {
        return Err(Error::InvalidArgument("node outside the diagram".to_string()));
    }
    if rank == 0 || rank as usize > v {
        return Err(Error::InvalidArgument(
            "rank must lie between 1 and the node dimension".to_string(),
        ));
    }
    let range = f.range();
    let cap = f.cap();
    let descriptors: Vec<ShiftDescriptor> = cells
        .iter()
        .map(|c| partition.shift_descriptor(*c))
        .collect::<Result<_>>()?;
    let mut total = TruncatedSeries::zero(range, cap);
    for subset in combinations(v, rank as usize) {
        let mut coeff = TruncatedSeries::one(range, cap);
        for &i in &subset {
            for j in 0..v {
                if subset.contains(&j) {
                    continue;
                }
                let factor =
                    pair_factor_series(partition, cells[i], cells[j], range, cap, ctx)?;
                coeff = coeff.mul(&factor)?;
            }
        }
        let chosen: Vec<&ShiftDescriptor> = subset.iter().map(|i| &descriptors[*i]).collect();
        let e = ShiftDescriptor::combine(&chosen, range);
        let mut scalar = Rational::one();
        for &i in &subset {
            let h = cells[i].height() as i64;
            scalar *= &avals[(h - 1) as usize] / ctx.hbar_pow(h - 1);
        }
        let term = coeff.mul(&f.q_shift(&e, ctx))?.scale(&scalar);
        total = total.add(&term)?;
    }
    let r = rank as i64;
    Ok(total.scale(&ctx.hbar_pow(r * (r - 1) / 2)))
}

/// T(τ) applied to the bare vertex function.
pub fn descendant_vertex(
    partition: &Partition,
    tau: &DescendantPolynomial,
    cap: u32,
    ctx: &SpecializationContext,
) -> Result<TruncatedSeries> {
    let v = vertex_product(partition, cap, ctx)?;
    let mut out = TruncatedSeries::zero(v.range(), cap);
    for (coeff, monomial) in tau.terms() {
        let mut acc = v.clone();
        for (node, rank) in monomial {
            acc = macdonald_apply(partition, *node, *rank, &acc, ctx)?;
        }
        out = out.add(&acc.scale(&Rational::from_integer((*coeff).into())))?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Capped vertex expressions
// ---------------------------------------------------------------------------

/// One subset term of the capped vertex: a constant ħ-power, the pair
/// coefficients, and the box transforms picked up by the ζ-shift of the
/// subset.
#[derive(Debug, Clone)]
pub struct CappedTerm {
    pub subset: Vec<Cell>,
    /// (□ ∈ I, □' ∉ I) pairs of the coefficient product.
    pub pairs: Vec<(Cell, Cell)>,
    /// (□', k): the factor ∏_{j=0}^{k−1} (1 − q^j z_□')/(1 − ħ q^j z_□')
    /// (inverted for k < 0). The shifts of the acceptance-scale diagrams
    /// give k = 1 exactly on the slices of the subset.
    pub transforms: Vec<(Cell, i64)>,
}

/// The capped vertex function with descendant Λ^r V_n as a finite
/// rational expression: ħ-prefactor times a sum over r-subsets of the
/// content class.
#[derive(Debug, Clone)]
pub struct CappedVertexExpression {
    partition: Partition,
    node: i32,
    rank: u32,
    prefactor_exp: i64,
    terms: Vec<CappedTerm>,
}

impl CappedVertexExpression {
    pub fn node(&self) -> i32 {
        self.node
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Exponent of the ħ prefactor: r(r−1)/2 + β(n).
    pub fn prefactor_exp(&self) -> i64 {
        self.prefactor_exp
    }

    pub fn terms(&self) -> &[CappedTerm] {
        &self.terms
    }
}

pub fn capped_expression(
    partition: &Partition,
    node: i32,
    rank: u32,
) -> Result<CappedVertexExpression> {
    let cells = partition.cells_at_content(node);
    let v = cells.len();
    if v == 0 {
        return Err(Error::InvalidArgument("node outside the diagram".to_string()));
    }
    if rank == 0 || rank as usize > v {
        return Err(Error::InvalidArgument(
            "rank must lie between 1 and the node dimension".to_string(),
        ));
    }
    let descriptors: Vec<ShiftDescriptor> = cells
        .iter()
        .map(|c| partition.shift_descriptor(*c))
        .collect::<Result<_>>()?;
    let mut terms = Vec::new();
    for subset in combinations(v, rank as usize) {
        let mut pairs = Vec::new();
        for &i in &subset {
            for j in 0..v {
                if !subset.contains(&j) {
                    pairs.push((cells[i], cells[j]));
                }
            }
        }
        let chosen: Vec<&ShiftDescriptor> = subset.iter().map(|i| &descriptors[*i]).collect();
        let e = ShiftDescriptor::combine(&chosen, partition.var_range());
        let mut transforms = Vec::new();
        for other in partition.cells() {
            let m = partition.z_monomial(other)?;
            let k: i64 = e.iter().zip(m.zexp()).map(|(a, b)| a * b).sum();
            if k != 0 {
                transforms.push((other, k));
            }
        }
        terms.push(CappedTerm {
            subset: subset.iter().map(|i| cells[*i]).collect(),
            pairs,
            transforms,
        });
    }
    let r = rank as i64;
    Ok(CappedVertexExpression {
        partition: partition.clone(),
        node,
        rank,
        prefactor_exp: r * (r - 1) / 2 + beta(node),
        terms,
    })
}

/// Exact evaluation of the capped vertex at a rational z-point.
pub fn capped_eval(
    expr: &CappedVertexExpression,
    point: &[Rational],
    ctx: &SpecializationContext,
) -> Result<Rational> {
    let la = &expr.partition;
    let mut total = Rational::zero();
    for term in &expr.terms {
        let mut val = Rational::one();
        for (a, b) in &term.pairs {
            val *= pair_factor_eval(la, *a, *b, point, ctx)?;
        }
        for (cell, k) in &term.transforms {
            val *= transform_factor_eval(la, *cell, *k, point, ctx)?;
        }
        total += val;
    }
    Ok(total * ctx.hbar_pow(expr.prefactor_exp))
}

fn transform_factor_eval(
    partition: &Partition,
    cell: Cell,
    k: i64,
    point: &[Rational],
    ctx: &SpecializationContext,
) -> Result<Rational> {
    let z = partition.z_monomial(cell)?.eval(point, ctx)?;
    let mut val = Rational::one();
    let steps = k.unsigned_abs();
    for j in 0..steps {
        let zq = if k > 0 {
            z.clone() * ctx.q_pow(j as i64)
        } else {
            z.clone() * ctx.q_pow(-(j as i64) - 1)
        };
        let num = Rational::one() - &zq;
        let den = Rational::one() - ctx.hbar().clone() * &zq;
        if den.is_zero() || (k < 0 && num.is_zero()) {
            return Err(Error::Pole(slice_name(cell)));
        }
        if k > 0 {
            val *= num / den;
        } else {
            val *= den / num;
        }
    }
    Ok(val)
}

fn slice_name(cell: Cell) -> String {
    let mut s = String::from("box factor ");
    s.push_str(&format_cell_address(cell));
    s
}

/// Series expansion of the capped vertex in the positive zone.
pub fn capped_expand(
    expr: &CappedVertexExpression,
    cap: u32,
    ctx: &SpecializationContext,
) -> Result<TruncatedSeries> {
    let la = &expr.partition;
    let range = la.var_range();
    let mut total = TruncatedSeries::zero(range, cap);
    for term in &expr.terms {
        let mut val = TruncatedSeries::one(range, cap);
        for (a, b) in &term.pairs {
            val = val.mul(&pair_factor_series(la, *a, *b, range, cap, ctx)?)?;
        }
        for (cell, k) in &term.transforms {
            val = val.mul(&transform_factor_series(la, *cell, *k, cap, ctx)?)?;
        }
        total = total.add(&val)?;
    }
    Ok(total.scale(&ctx.hbar_pow(expr.prefactor_exp)))
}

fn transform_factor_series(
    partition: &Partition,
    cell: Cell,
    k: i64,
    cap: u32,
    ctx: &SpecializationContext,
) -> Result<TruncatedSeries> {
    let m = partition.z_monomial(cell)?;
    let range = m.range();
    let expo = m.unsigned_zexp().expect("box monomials are effective");
    let scale = m.specialized_scale(ctx);
    let mut val = TruncatedSeries::one(range, cap);
    let steps = k.unsigned_abs();
    for j in 0..steps {
        let qj = if k > 0 {
            ctx.q_pow(j as i64)
        } else {
            ctx.q_pow(-(j as i64) - 1)
        };
        let num = TruncatedSeries::binomial_factor(range, cap, &expo, &(scale.clone() * &qj));
        let den = TruncatedSeries::geometric_inverse(
            range,
            cap,
            &expo,
            &(scale.clone() * &qj * ctx.hbar()),
        )?;
        if k > 0 {
            val = val.mul(&num)?.mul(&den)?;
        } else {
            // inverted factor: (1 − ħ z q^{−j−1})/(1 − z q^{−j−1})
            let numi =
                TruncatedSeries::binomial_factor(range, cap, &expo, &(scale.clone() * &qj * ctx.hbar()));
            let deni =
                TruncatedSeries::geometric_inverse(range, cap, &expo, &(scale.clone() * &qj))?;
            val = val.mul(&numi)?.mul(&deni)?;
        }
    }
    Ok(val)
}

// ---------------------------------------------------------------------------
// Gluing factor
// ---------------------------------------------------------------------------

/// g(z) = ∏_□ (1 − z_□)/(1 − ħ z_□) as a truncated series.
pub fn gluing(
    partition: &Partition,
    cap: u32,
    ctx: &SpecializationContext,
) -> Result<TruncatedSeries> {
    let range = partition.var_range();
    let mut acc = TruncatedSeries::one(range, cap);
    for cell in partition.cells() {
        let m = partition.z_monomial(cell)?;
        let expo = m.unsigned_zexp().expect("effective");
        let c = m.specialized_scale(ctx);
        let num = TruncatedSeries::binomial_factor(range, cap, &expo, &c);
        let den = TruncatedSeries::geometric_inverse(
            range,
            cap,
            &expo,
            &(c.clone() * ctx.hbar()),
        )?;
        acc = acc.mul(&num)?.mul(&den)?;
    }
    Ok(acc)
}

/// Exact value of the gluing factor at a rational z-point.
pub fn gluing_eval(
    partition: &Partition,
    point: &[Rational],
    ctx: &SpecializationContext,
) -> Result<Rational> {
    let mut acc = Rational::one();
    for cell in partition.cells() {
        let z = partition.z_monomial(cell)?.eval(point, ctx)?;
        let den = Rational::one() - ctx.hbar().clone() * &z;
        if den.is_zero() {
            return Err(Error::Pole(slice_name(cell)));
        }
        acc *= (Rational::one() - z) / den;
    }
    Ok(acc)
}

/// Per-box q-difference factor check at series level: F(q t)(1 − ħ t)
/// equals F(t)(1 − t) for the box chain in one formal variable t.
pub fn box_factor_qde_holds(cap: u32, ctx: &SpecializationContext) -> bool {
    let range = VarRange::new(0, 0);
    let f = TruncatedSeries::pochhammer_chain(range, cap, &[1], &Rational::one(), ctx)
        .expect("chain");
    let fq = f.q_shift(&[1], ctx);
    let lhs = fq
        .mul(&TruncatedSeries::binomial_factor(range, cap, &[1], ctx.hbar()))
        .expect("compatible");
    let rhs = f
        .mul(&TruncatedSeries::binomial_factor(range, cap, &[1], &Rational::one()))
        .expect("compatible");
    lhs == rhs
}
