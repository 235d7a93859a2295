//! Stability chambers and characters of tautological bundles.
//!
//! Each box carries the K-character of its monomial z_□, and each
//! same-content pair the character of the operator ratio; a rational
//! direction θ off the walls assigns every character a sign. Chambers are
//! enumerated exactly with a Fourier–Motzkin feasibility kernel.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partitions::{format_cell_address, Cell, Partition};
use crate::qseries::{LaurentPoly, Rational, SpecializationContext, TruncatedSeries, VarRange};
use crate::vertex::{capped_expression, CappedVertexExpression};

/// Integer exponent vector of a monomial in the z_i, the ħ/q part dropped.
pub type CharacterVector = Vec<i64>;

fn dot(theta: &[Rational], character: &[i64]) -> Rational {
    let mut acc = Rational::zero();
    for (t, c) in theta.iter().zip(character) {
        acc += t * Rational::from_integer((*c).into());
    }
    acc
}

fn sign_of(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// A chamber of the arrangement: a direction together with the signs it
/// assigns to every box character and same-content pair character.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    theta: Vec<Rational>,
    box_signs: Vec<i8>,
    pair_signs: BTreeMap<(usize, usize), i8>,
}

impl Chamber {
    pub fn theta(&self) -> &[Rational] {
        &self.theta
    }

    /// Sign of ⟨σ_□, θ⟩ for the cell at `index` in canonical order.
    pub fn box_sign(&self, index: usize) -> i8 {
        self.box_signs[index]
    }

    pub fn box_signs(&self) -> &[i8] {
        &self.box_signs
    }

    /// Sign of the pair character for cells (i, j), i < j in canonical
    /// order within a content class; antisymmetric in its arguments.
    pub fn pair_sign(&self, i: usize, j: usize) -> i8 {
        if i < j {
            self.pair_signs[&(i, j)]
        } else {
            -self.pair_signs[&(j, i)]
        }
    }

    /// Number of boxes on the negative side.
    pub fn p_value(&self) -> usize {
        self.box_signs.iter().filter(|s| **s < 0).count()
    }

    pub fn is_positive(&self) -> bool {
        self.box_signs.iter().all(|s| *s > 0)
    }
}

/// Classifies a rational direction, failing on any wall.
pub fn classify(partition: &Partition, theta: &[Rational]) -> Result<Chamber> {
    let range = partition.var_range();
    if theta.len() != range.len() {
        return Err(Error::InvalidArgument(
            "direction length must match the content range".to_string(),
        ));
    }
    let cells = partition.cells();
    let mut box_signs = Vec::with_capacity(cells.len());
    for cell in &cells {
        let chi = partition.z_monomial(*cell)?.character();
        let s = sign_of(&dot(theta, &chi));
        if s == 0 {
            return Err(Error::Wall(format_cell_address(*cell)));
        }
        box_signs.push(s);
    }
    let mut pair_signs = BTreeMap::new();
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            if cells[i].content() != cells[j].content() {
                continue;
            }
            let chi = partition.operator_pair_ratio(cells[i], cells[j])?.character();
            let s = sign_of(&dot(theta, &chi));
            if s == 0 {
                let mut name = format_cell_address(cells[i]);
                name.push('|');
                name.push_str(&format_cell_address(cells[j]));
                return Err(Error::Wall(name));
            }
            pair_signs.insert((i, j), s);
        }
    }
    Ok(Chamber {
        theta: theta.to_vec(),
        box_signs,
        pair_signs,
    })
}

/// The canonical positive chamber (all box pairings positive).
pub fn positive_chamber(partition: &Partition) -> Chamber {
    let range = partition.var_range();
    let theta = vec![Rational::one(); range.len()];
    classify(partition, &theta).expect("the all-ones direction lies off every wall")
}

// ---------------------------------------------------------------------------
// Exact feasibility of strict homogeneous systems
// ---------------------------------------------------------------------------

fn primitive(row: &[Rational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for r in row {
        lcm = lcm.lcm(r.denom());
    }
    let ints: Vec<BigInt> = row.iter().map(|r| r.numer() * &lcm / r.denom()).collect();
    let mut g = BigInt::zero();
    for v in &ints {
        g = g.gcd(v);
    }
    if g.is_zero() {
        return ints;
    }
    ints.iter().map(|v| v / &g).collect()
}

/// Finds an interior point of {x : row·x > 0 for all rows}, if any,
/// by Fourier–Motzkin elimination with exact back-substitution.
pub fn strict_interior_point(rows: &[Vec<Rational>], dim: usize) -> Option<Vec<Rational>> {
    if rows.iter().any(|r| r.iter().all(|c| c.is_zero())) {
        return None;
    }
    if dim == 0 {
        return if rows.is_empty() { Some(Vec::new()) } else { None };
    }
    if dim == 1 {
        let mut pos = false;
        let mut neg = false;
        for r in rows {
            match sign_of(&r[0]) {
                1 => pos = true,
                -1 => neg = true,
                _ => unreachable!("zero rows were filtered"),
            }
        }
        return match (pos, neg) {
            (true, true) => None,
            (true, false) => Some(vec![Rational::one()]),
            (false, true) => Some(vec![-Rational::one()]),
            (false, false) => Some(vec![Rational::one()]),
        };
    }
    let last = dim - 1;
    let mut zero_rows: Vec<Vec<Rational>> = Vec::new();
    let mut pos_rows: Vec<Vec<Rational>> = Vec::new();
    let mut neg_rows: Vec<Vec<Rational>> = Vec::new();
    for r in rows {
        match sign_of(&r[last]) {
            0 => zero_rows.push(r[..last].to_vec()),
            1 => pos_rows.push(r.clone()),
            _ => neg_rows.push(r.clone()),
        }
    }
    let mut reduced: Vec<Vec<Rational>> = zero_rows;
    for p in &pos_rows {
        for n in &neg_rows {
            // p·x + p_m x_m > 0, n·x + n_m x_m > 0, p_m > 0 > n_m
            // eliminate x_m: p_m·n' − n_m·p' applied to the head
            let mut row = Vec::with_capacity(last);
            for k in 0..last {
                row.push(&p[last] * &n[k] - &n[last] * &p[k]);
            }
            if row.iter().all(|c| c.is_zero()) {
                return None;
            }
            row = primitive(&row)
                .into_iter()
                .map(Rational::from_integer)
                .collect();
            reduced.push(row);
        }
    }
    // dedup
    let mut seen: Vec<Vec<BigInt>> = Vec::new();
    let mut unique = Vec::new();
    for r in reduced {
        let key = primitive(&r);
        if !seen.contains(&key) {
            seen.push(key);
            unique.push(r);
        }
    }
    let head = strict_interior_point(&unique, last)?;
    // bounds for the eliminated coordinate
    let mut lower: Option<Rational> = None;
    let mut upper: Option<Rational> = None;
    for p in &pos_rows {
        let mut v = Rational::zero();
        for k in 0..last {
            v += &p[k] * &head[k];
        }
        let bound = -v / &p[last];
        if lower.as_ref().map(|l| bound > *l).unwrap_or(true) {
            lower = Some(bound);
        }
    }
    for n in &neg_rows {
        let mut v = Rational::zero();
        for k in 0..last {
            v += &n[k] * &head[k];
        }
        let bound = -v / &n[last];
        if upper.as_ref().map(|u| bound < *u).unwrap_or(true) {
            upper = Some(bound);
        }
    }
    let x = match (lower, upper) {
        (Some(l), Some(u)) => {
            if l >= u {
                return None;
            }
            (l + u) / Rational::from_integer(2.into())
        }
        (Some(l), None) => l + Rational::one(),
        (None, Some(u)) => u - Rational::one(),
        (None, None) => Rational::zero(),
    };
    let mut point = head;
    point.push(x);
    Some(point)
}

/// Distinct primitive wall normals of the arrangement.
pub fn wall_normals(partition: &Partition) -> Result<Vec<Vec<i64>>> {
    let cells = partition.cells();
    let mut normals: Vec<Vec<i64>> = Vec::new();
    let mut push = |chi: CharacterVector| {
        let mut v = chi;
        // primitive and sign-canonical
        let g = v.iter().fold(0i64, |acc, x| {
            let a = x.unsigned_abs() as i64;
            if acc == 0 {
                a
            } else if a == 0 {
                acc
            } else {
                let (mut x, mut y) = (acc, a);
                while y != 0 {
                    let t = x % y;
                    x = y;
                    y = t;
                }
                x
            }
        });
        if g > 0 {
            for x in v.iter_mut() {
                *x /= g;
            }
        }
        if let Some(first) = v.iter().find(|x| **x != 0) {
            if *first < 0 {
                for x in v.iter_mut() {
                    *x = -*x;
                }
            }
            if !normals.contains(&v) {
                normals.push(v);
            }
        }
    };
    for cell in &cells {
        push(partition.z_monomial(*cell)?.character());
    }
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            if cells[i].content() == cells[j].content() {
                push(partition.operator_pair_ratio(cells[i], cells[j])?.character());
            }
        }
    }
    normals.sort();
    Ok(normals)
}

/// Enumerates the chambers of the refined arrangement, one interior
/// rational direction each, ordered by their sign vectors on the walls.
pub fn enumerate_chambers(partition: &Partition) -> Result<Vec<Chamber>> {
    let walls = wall_normals(partition)?;
    let dim = partition.var_range().len();
    let mut out = Vec::new();
    let mut constraints: Vec<Vec<Rational>> = Vec::new();
    fn rec(
        partition: &Partition,
        walls: &[Vec<i64>],
        idx: usize,
        dim: usize,
        constraints: &mut Vec<Vec<Rational>>,
        out: &mut Vec<Chamber>,
    ) -> Result<()> {
        match strict_interior_point(constraints, dim) {
            None => return Ok(()),
            Some(point) => {
                if idx == walls.len() {
                    out.push(classify(partition, &point)?);
                    return Ok(());
                }
            }
        }
        for sign in [1i64, -1] {
            let row: Vec<Rational> = walls[idx]
                .iter()
                .map(|w| Rational::from_integer((w * sign).into()))
                .collect();
            constraints.push(row);
            rec(partition, walls, idx + 1, dim, constraints, out)?;
            constraints.pop();
        }
        Ok(())
    }
    rec(partition, &walls, 0, dim, &mut constraints, &mut out)?;
    Ok(out)
}

// ---------------------------------------------------------------------------
// Characters of tautological bundles
// ---------------------------------------------------------------------------

/// m_𝔠(□): same-content partners on the positive side of the pair
/// character minus slice members on the negative side of the box character.
pub fn m_value(partition: &Partition, cell: Cell, chamber: &Chamber) -> Result<i64> {
    let cells = partition.cells();
    let me = cells
        .iter()
        .position(|c| *c == cell)
        .ok_or(Error::CellOutsideDiagram {
            content: cell.content(),
            height: cell.height(),
        })?;
    let mut m = 0i64;
    for (j, other) in cells.iter().enumerate() {
        if j != me && other.content() == cell.content() && chamber.pair_sign(me, j) > 0 {
            m += 1;
        }
    }
    for other in partition.slice_cells(cell)? {
        let j = cells.iter().position(|c| *c == other).expect("slice cell");
        if chamber.box_sign(j) < 0 {
            m -= 1;
        }
    }
    Ok(m)
}

/// e_r evaluated on {ħ^{m_𝔠(□)} : □ of content n}, symbolic in ħ.
pub fn tautological_character(
    partition: &Partition,
    node: i32,
    rank: u32,
    chamber: &Chamber,
) -> Result<LaurentPoly> {
    let cells = partition.cells_at_content(node);
    if cells.is_empty() {
        return Err(Error::InvalidArgument("node outside the diagram".to_string()));
    }
    if rank == 0 || rank as usize > cells.len() {
        return Err(Error::InvalidArgument(
            "rank must lie between 1 and the node dimension".to_string(),
        ));
    }
    let powers: Vec<i64> = cells
        .iter()
        .map(|c| m_value(partition, *c, chamber))
        .collect::<Result<_>>()?;
    Ok(LaurentPoly::elementary_symmetric(&powers, rank as usize))
}

/// The limit of the capped vertex at the chamber's limit point, as a
/// Laurent polynomial in ħ (the ħ^{r(r−1)/2+β(n)} prefactor included).
pub fn capped_limit(
    partition: &Partition,
    node: i32,
    rank: u32,
    chamber: &Chamber,
) -> Result<LaurentPoly> {
    let expr = capped_expression(partition, node, rank)?;
    Ok(capped_limit_of_expression(partition, &expr, chamber))
}

fn capped_limit_of_expression(
    partition: &Partition,
    expr: &CappedVertexExpression,
    chamber: &Chamber,
) -> LaurentPoly {
    let cells = partition.cells();
    let index_of = |c: &Cell| cells.iter().position(|x| x == c).expect("cell");
    let mut total = LaurentPoly::zero();
    for term in expr.terms() {
        let mut power = 0i64;
        for (a, b) in &term.pairs {
            // (ħ − u)/(1 − u) → ħ when u → 0, i.e. positive pairing
            if chamber.pair_sign(index_of(a), index_of(b)) > 0 {
                power += 1;
            }
        }
        for (cell, k) in &term.transforms {
            // (1 − z)/(1 − ħz) → ħ^{-1} as z → ∞, per transform step
            if chamber.box_sign(index_of(cell)) < 0 {
                power -= k;
            }
        }
        total.add_term(power, &Rational::one());
    }
    total.shift(expr.prefactor_exp())
}

// ---------------------------------------------------------------------------
// Chamber solutions of the q-difference equation
// ---------------------------------------------------------------------------

/// Laurent series graded by ⟨d, θ⟩ and truncated at a rational cap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberSeries {
    range: VarRange,
    theta: Vec<Rational>,
    cap: Rational,
    terms: BTreeMap<Vec<i32>, Rational>,
}

impl ChamberSeries {
    pub fn one(range: VarRange, theta: Vec<Rational>, cap: Rational) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(vec![0; range.len()], Rational::one());
        ChamberSeries {
            range,
            theta,
            cap,
            terms,
        }
    }

    pub fn range(&self) -> VarRange {
        self.range
    }

    fn grade(&self, expo: &[i32]) -> Rational {
        let mut acc = Rational::zero();
        for (t, e) in self.theta.iter().zip(expo) {
            acc += t * Rational::from_integer((*e).into());
        }
        acc
    }

    pub fn insert_term(&mut self, expo: Vec<i32>, coeff: Rational) {
        if coeff.is_zero() || self.grade(&expo) > self.cap {
            return;
        }
        let slot = self.terms.entry(expo).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            let key: Vec<Vec<i32>> = self
                .terms
                .iter()
                .filter(|(_, v)| v.is_zero())
                .map(|(k, _)| k.clone())
                .collect();
            for k in key {
                self.terms.remove(&k);
            }
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&vec![0; self.range.len()])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i32>, &Rational)> {
        self.terms.iter()
    }

    /// Multiplies by Σ_k coeffs[k]·(z^{step})^k where `step` may have
    /// negative entries; the factor's grade per step must be positive.
    pub fn mul_chain(&self, step: &[i64], coeffs: &[Rational]) -> ChamberSeries {
        let mut out = ChamberSeries {
            range: self.range,
            theta: self.theta.clone(),
            cap: self.cap.clone(),
            terms: BTreeMap::new(),
        };
        for (expo, c) in &self.terms {
            for (k, ck) in coeffs.iter().enumerate() {
                let mut e = expo.clone();
                for (i, s) in step.iter().enumerate() {
                    e[i] += (*s as i32) * k as i32;
                }
                out.insert_term(e, c.clone() * ck);
            }
        }
        out
    }

    /// Converts to a total-degree-truncated series when the exponents are
    /// all nonnegative (e.g. in the positive chamber).
    pub fn to_truncated(&self, cap: u32) -> Option<TruncatedSeries> {
        let mut out = TruncatedSeries::zero(self.range, cap);
        for (expo, c) in &self.terms {
            let mut e = Vec::with_capacity(expo.len());
            for x in expo {
                if *x < 0 {
                    return None;
                }
                e.push(*x as u32);
            }
            out.insert_term(crate::qseries::Mono(e), c.clone());
        }
        Some(out)
    }
}

/// The solution of the box q-difference equation attached to a chamber:
/// the analytic part together with the data of the multivalued prefactor.
#[derive(Debug, Clone)]
pub struct ChamberSolution {
    pub analytic: ChamberSeries,
    pub p_value: usize,
    pub negative_cells: Vec<Cell>,
}

/// Expands the chamber solution: boxes on the positive side in z_□, boxes
/// on the negative side in z_□^{-1} starting at q, truncated at chamber
/// grade ≤ cap.
pub fn chamber_vertex(
    partition: &Partition,
    chamber: &Chamber,
    cap: Rational,
    ctx: &SpecializationContext,
) -> Result<ChamberSolution> {
    let range = partition.var_range();
    let cells = partition.cells();
    let mut acc = ChamberSeries::one(range, chamber.theta().to_vec(), cap.clone());
    let mut negative_cells = Vec::new();
    for (i, cell) in cells.iter().enumerate() {
        let m = partition.z_monomial(*cell)?;
        let scale = m.specialized_scale(ctx);
        let grade = dot(chamber.theta(), m.zexp());
        // number of chain steps fitting under the cap
        let per = if chamber.box_sign(i) > 0 {
            grade.clone()
        } else {
            -grade.clone()
        };
        debug_assert!(per.is_positive());
        let mut kmax = 0u32;
        while Rational::from_integer(((kmax + 1) as i64).into()) * &per <= cap {
            kmax += 1;
        }
        let mut coeffs = Vec::with_capacity(kmax as usize + 1);
        if chamber.box_sign(i) > 0 {
            let mut spow = Rational::one();
            for k in 0..=kmax {
                coeffs.push(crate::qseries::box_chain_coefficient(k, ctx) * &spow);
                spow *= &scale;
            }
            acc = acc.mul_chain(m.zexp(), &coeffs);
        } else {
            negative_cells.push(*cell);
            // Σ_k (ħ;q)_k/(q;q)_k (q/ħ)^k z_□^{-k}
            let sinv = scale.recip();
            let qh = ctx.q().clone() / ctx.hbar();
            let mut spow = Rational::one();
            for k in 0..=kmax {
                coeffs.push(crate::qseries::box_chain_coefficient(k, ctx) * &spow);
                spow *= &sinv * &qh;
            }
            let step: Vec<i64> = m.zexp().iter().map(|e| -e).collect();
            acc = acc.mul_chain(&step, &coeffs);
        }
    }
    Ok(ChamberSolution {
        analytic: acc,
        p_value: chamber.p_value(),
        negative_cells,
    })
}
