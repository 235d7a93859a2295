//! Combinatorics of 45°-rotated Young diagrams.
//!
//! Cells are addressed by 1-based rectangular coordinates (row, col) with
//! content c = row − col, so the corner cell has content 0 and the diagram
//! of (5,4,3,2) occupies contents −4..3 with column profile
//! (1,1,2,2,3,2,2,1). The arm of a cell counts the cells below it, the leg
//! the cells to its right; the height of the cells of content c runs
//! 1..v_c starting nearest the corner.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qseries::{Rational, SpecializationContext, VarRange};

/// A cell of the diagram in rectangular coordinates, both 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    pub row: u32,
    pub col: u32,
}

impl Cell {
    pub fn new(row: u32, col: u32) -> Self {
        Cell { row, col }
    }

    pub fn content(&self) -> i32 {
        self.row as i32 - self.col as i32
    }

    pub fn height(&self) -> u32 {
        self.row.min(self.col)
    }
}

/// Number of cells per content, together with σ accessors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnProfile {
    lo: i32,
    hi: i32,
    counts: Vec<u32>,
}

impl ColumnProfile {
    pub fn lo(&self) -> i32 {
        self.lo
    }

    pub fn hi(&self) -> i32 {
        self.hi
    }

    /// v_i, zero outside the support.
    pub fn count(&self, content: i32) -> u32 {
        if content < self.lo || content > self.hi {
            0
        } else {
            self.counts[(content - self.lo) as usize]
        }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// σ_λ(i) = v_{i−1} − v_i + [i = 0].
    pub fn sigma(&self, content: i32) -> i64 {
        let mut s = self.count(content - 1) as i64 - self.count(content) as i64;
        if content == 0 {
            s += 1;
        }
        s
    }
}

/// A weakly decreasing list of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidPartition("no parts".to_string()));
        }
        for w in parts.windows(2) {
            if w[1] > w[0] {
                return Err(Error::InvalidPartition("parts must be decreasing".to_string()));
            }
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition("zero part".to_string()));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn rows(&self) -> u32 {
        self.parts.len() as u32
    }

    /// λ_i, zero past the last row (1-based).
    pub fn part(&self, row: u32) -> u32 {
        if row == 0 || row > self.rows() {
            0
        } else {
            self.parts[(row - 1) as usize]
        }
    }

    /// λ'_j = number of rows of length ≥ j (1-based).
    pub fn conjugate_part(&self, col: u32) -> u32 {
        if col == 0 {
            return 0;
        }
        self.parts.iter().filter(|p| **p >= col).count() as u32
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.row >= 1 && cell.col >= 1 && cell.col <= self.part(cell.row)
    }

    fn check_cell(&self, cell: Cell) -> Result<()> {
        if self.contains(cell) {
            Ok(())
        } else {
            Err(Error::CellOutsideDiagram {
                content: cell.content(),
                height: cell.height(),
            })
        }
    }

    /// Arm: number of cells strictly below (same column).
    pub fn arm(&self, cell: Cell) -> u32 {
        self.conjugate_part(cell.col) - cell.row
    }

    /// Leg: number of cells strictly to the right (same row).
    pub fn leg(&self, cell: Cell) -> u32 {
        self.part(cell.row) - cell.col
    }

    pub fn profile(&self) -> ColumnProfile {
        let lo = 1 - self.parts[0] as i32;
        let hi = self.rows() as i32 - 1;
        let mut counts = vec![0u32; (hi - lo + 1) as usize];
        for cell in self.cells() {
            counts[(cell.content() - lo) as usize] += 1;
        }
        ColumnProfile { lo, hi, counts }
    }

    /// Content range of the Kähler variables z_i.
    pub fn var_range(&self) -> VarRange {
        VarRange::new(1 - self.parts[0] as i32, self.rows() as i32 - 1)
    }

    /// All cells, content ascending then height ascending.
    pub fn cells(&self) -> Vec<Cell> {
        let range = self.var_range();
        let mut out = Vec::with_capacity(self.size() as usize);
        for content in range.lo..=range.hi {
            out.extend(self.cells_at_content(content));
        }
        out
    }

    /// Cells of one content, height ascending.
    pub fn cells_at_content(&self, content: i32) -> Vec<Cell> {
        let mut out = Vec::new();
        let mut h = 1u32;
        while let Ok(c) = self.cell_at(content, h) {
            out.push(c);
            h += 1;
        }
        out
    }

    /// The cell with the given content and height, if present.
    pub fn cell_at(&self, content: i32, height: u32) -> Result<Cell> {
        if height == 0 {
            return Err(Error::CellOutsideDiagram { content, height });
        }
        let cell = if content >= 0 {
            Cell::new(height + content as u32, height)
        } else {
            Cell::new(height, height + (-content) as u32)
        };
        self.check_cell(cell)?;
        Ok(cell)
    }

    /// The hook based at a cell: the cell, its arm, and its leg.
    pub fn hook_cells(&self, cell: Cell) -> Result<Vec<Cell>> {
        self.check_cell(cell)?;
        let mut out = vec![cell];
        for r in cell.row + 1..=self.conjugate_part(cell.col) {
            out.push(Cell::new(r, cell.col));
        }
        for c in cell.col + 1..=self.part(cell.row) {
            out.push(Cell::new(cell.row, c));
        }
        out.sort_by_key(|c| (c.content(), c.height()));
        Ok(out)
    }

    /// The slice through a cell: the cells of the minimal rectangle
    /// containing the cell's content class that share the cell's column
    /// (content ≥ 0) or row (content < 0).
    pub fn slice_cells(&self, cell: Cell) -> Result<Vec<Cell>> {
        self.check_cell(cell)?;
        let c = cell.content();
        let v = self.profile().count(c);
        let mut out = Vec::new();
        if c >= 0 {
            // rectangle of c + v rows and v columns; take the cell's column
            for r in 1..=(c as u32 + v) {
                out.push(Cell::new(r, cell.col));
            }
        } else {
            // rectangle of v rows and v − c columns; take the cell's row
            for j in 1..=(v + (-c) as u32) {
                out.push(Cell::new(cell.row, j));
            }
        }
        for sc in &out {
            debug_assert!(self.contains(*sc), "slice escapes the diagram");
        }
        out.sort_by_key(|c| (c.content(), c.height()));
        Ok(out)
    }

    /// ζ-index of the numerator in z_□ = ζ_{c−l−1}/ζ_{c+a}; constant along rows.
    pub fn num_index(&self, cell: Cell) -> i32 {
        cell.content() - self.leg(cell) as i32 - 1
    }

    /// ζ-index of the denominator; constant along columns.
    pub fn den_index(&self, cell: Cell) -> i32 {
        cell.content() + self.arm(cell) as i32
    }

    /// z_□ as a monomial in the z_i with its (ħ/q) prefactor.
    pub fn z_monomial(&self, cell: Cell) -> Result<BoxMonomial> {
        self.check_cell(cell)?;
        let range = self.var_range();
        let profile = self.profile();
        let mut zexp = vec![0i64; range.len()];
        let mut hq = 0i64;
        let lo_c = self.num_index(cell) + 1;
        let hi_c = self.den_index(cell);
        for i in lo_c..=hi_c {
            zexp[range.index(i).expect("hook content in range")] += 1;
            hq += profile.sigma(i);
        }
        Ok(BoxMonomial {
            range,
            zexp,
            hq,
            scale: Rational::one(),
        })
    }

    /// ζ_□ = (ħ/q)^{±h} ζ_index, per the sign of the content.
    pub fn zeta_monomial(&self, cell: Cell) -> Result<ZetaMonomial> {
        self.check_cell(cell)?;
        let h = cell.height() as i64;
        if cell.content() >= 0 {
            Ok(ZetaMonomial {
                index: self.den_index(cell),
                hq: h,
            })
        } else {
            Ok(ZetaMonomial {
                index: self.num_index(cell),
                hq: -h,
            })
        }
    }

    /// ζ_a / ζ_b as a monomial in the z_i.
    pub fn zeta_ratio(&self, a: Cell, b: Cell) -> Result<BoxMonomial> {
        let za = self.zeta_monomial(a)?;
        let zb = self.zeta_monomial(b)?;
        Ok(self.zeta_index_ratio(za, zb))
    }

    fn zeta_index_ratio(&self, za: ZetaMonomial, zb: ZetaMonomial) -> BoxMonomial {
        let range = self.var_range();
        let mut zexp = vec![0i64; range.len()];
        // ζ_j / ζ_k = ∏_{i=j+1}^{k} z_i for j < k
        if za.index < zb.index {
            for i in za.index + 1..=zb.index {
                zexp[range.index(i).expect("zeta index in range")] += 1;
            }
        } else {
            for i in zb.index + 1..=za.index {
                zexp[range.index(i).expect("zeta index in range")] -= 1;
            }
        }
        BoxMonomial {
            range,
            zexp,
            hq: za.hq - zb.hq,
            scale: Rational::one(),
        }
    }

    /// The ratio entering the operator coefficient for a same-content pair
    /// (□ ∈ I, □' ∉ I): the coefficient is (ħ − u)/(1 − u) in this ratio.
    ///
    /// For nonnegative contents this is ζ_□/ζ_{□'} as displayed; for
    /// negative contents the ħ-orientation of the coefficient flips, which
    /// amounts to taking the ratio of the reciprocal monomials with
    /// positive (ħ/q)-prefactors.
    pub fn operator_pair_ratio(&self, a: Cell, b: Cell) -> Result<BoxMonomial> {
        debug_assert_eq!(a.content(), b.content());
        if a.content() >= 0 {
            self.zeta_ratio(a, b)
        } else {
            let eta = |cell: Cell| -> Result<ZetaMonomial> {
                Ok(ZetaMonomial {
                    index: self.num_index(cell),
                    hq: cell.height() as i64,
                })
            };
            // ζ̃ = η^{-1}: ζ̃_a/ζ̃_b = η_b/η_a
            Ok(self.zeta_index_ratio(eta(b)?, eta(a)?))
        }
    }

    /// The conjugate diagram.
    pub fn transpose(&self) -> Partition {
        let conj: Vec<u32> = (1..=self.parts[0]).map(|j| self.conjugate_part(j)).collect();
        Partition::new(conj).expect("conjugate of a partition is a partition")
    }

    /// The ζ-shift attached to a cell: the unique substitution
    /// ζ_k → q^{s_k} ζ_k scaling z_□′ by q exactly for □′ in the slice
    /// through the cell and fixing every other z_□′.
    pub fn shift_descriptor(&self, cell: Cell) -> Result<ShiftDescriptor> {
        self.check_cell(cell)?;
        let slice = self.slice_cells(cell)?;
        // difference system s[num(□')] − s[den(□')] = [□' ∈ slice] over ζ-indices
        let mut adjacency: BTreeMap<i32, Vec<(i32, i32)>> = BTreeMap::new();
        for other in self.cells() {
            let n = self.num_index(other);
            let d = self.den_index(other);
            let rhs = if slice.contains(&other) { 1 } else { 0 };
            adjacency.entry(n).or_default().push((d, -rhs));
            adjacency.entry(d).or_default().push((n, rhs));
        }
        let root = self.num_index(cell);
        let root_value = if cell.content() >= 0 { 0 } else { 1 };
        let mut values: BTreeMap<i32, i32> = BTreeMap::new();
        values.insert(root, root_value);
        let mut queue = vec![root];
        while let Some(node) = queue.pop() {
            let base = values[&node];
            if let Some(edges) = adjacency.get(&node) {
                for (next, delta) in edges.clone() {
                    let want = base + delta;
                    match values.get(&next) {
                        Some(have) => {
                            if *have != want {
                                return Err(Error::UnrealizableShift {
                                    content: cell.content(),
                                    height: cell.height(),
                                });
                            }
                        }
                        None => {
                            values.insert(next, want);
                            queue.push(next);
                        }
                    }
                }
            }
        }
        let shifts: Vec<(i32, i32)> = values
            .into_iter()
            .filter(|(_, s)| *s != 0)
            .collect();
        debug_assert!(shifts.iter().all(|(_, s)| s.abs() == 1));
        Ok(ShiftDescriptor { shifts })
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Result<Vec<u32>> = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidPartition(s.to_string()))
            })
            .collect();
        Partition::new(parts?)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Formats "content:height" for a cell.
pub fn format_cell_address(cell: Cell) -> String {
    let mut s = cell.content().to_string();
    s.push(':');
    s.push_str(&cell.height().to_string());
    s
}

/// Parses "content:height" into a cell of the given diagram.
pub fn parse_cell_address(partition: &Partition, s: &str) -> Result<Cell> {
    let (c, h) = s
        .split_once(':')
        .ok_or_else(|| Error::InvalidArgument("cell address must be content:height".to_string()))?;
    let content: i32 = c
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument("bad content".to_string()))?;
    let height: u32 = h
        .trim()
        .parse()
        .map_err(|_| Error::InvalidArgument("bad height".to_string()))?;
    partition.cell_at(content, height)
}

/// (ħ/q)^{hq} ζ_index
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ZetaMonomial {
    pub index: i32,
    pub hq: i64,
}

/// A Laurent monomial in the z_i scaled by a rational and a power of ħ/q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxMonomial {
    range: VarRange,
    zexp: Vec<i64>,
    hq: i64,
    scale: Rational,
}

impl BoxMonomial {
    pub fn new(range: VarRange, zexp: Vec<i64>, hq: i64, scale: Rational) -> Self {
        assert_eq!(zexp.len(), range.len());
        BoxMonomial {
            range,
            zexp,
            hq,
            scale,
        }
    }

    pub fn range(&self) -> VarRange {
        self.range
    }

    pub fn zexp(&self) -> &[i64] {
        &self.zexp
    }

    pub fn hq(&self) -> i64 {
        self.hq
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    pub fn total_degree(&self) -> i64 {
        self.zexp.iter().sum()
    }

    pub fn mul(&self, other: &BoxMonomial) -> BoxMonomial {
        assert_eq!(self.range, other.range);
        BoxMonomial {
            range: self.range,
            zexp: self
                .zexp
                .iter()
                .zip(&other.zexp)
                .map(|(a, b)| a + b)
                .collect(),
            hq: self.hq + other.hq,
            scale: self.scale.clone() * &other.scale,
        }
    }

    pub fn inverse(&self) -> BoxMonomial {
        BoxMonomial {
            range: self.range,
            zexp: self.zexp.iter().map(|a| -a).collect(),
            hq: -self.hq,
            scale: self.scale.recip(),
        }
    }

    /// The scalar in front of the bare z-monomial once (q, ħ) are specialized.
    pub fn specialized_scale(&self, ctx: &SpecializationContext) -> Rational {
        self.scale.clone() * ctx.hq_pow(self.hq)
    }

    /// Exponents as unsigned, when the monomial has no negative powers.
    pub fn unsigned_zexp(&self) -> Option<Vec<u32>> {
        self.zexp
            .iter()
            .map(|e| u32::try_from(*e).ok())
            .collect()
    }

    /// Exact evaluation at a rational point indexed by the range.
    pub fn eval(&self, point: &[Rational], ctx: &SpecializationContext) -> Result<Rational> {
        assert_eq!(point.len(), self.range.len());
        let mut acc = self.specialized_scale(ctx);
        for (e, p) in self.zexp.iter().zip(point) {
            if *e < 0 && p.is_zero() {
                return Err(Error::Pole("monomial pole at zero coordinate".to_string()));
            }
            acc *= crate::qseries::rational_pow(p, *e);
        }
        Ok(acc)
    }

    /// The K-character of the monomial (the exponent vector alone).
    pub fn character(&self) -> Vec<i64> {
        self.zexp.clone()
    }
}

/// ζ-substitution ζ_k → q^{s_k} ζ_k, stored as the nonzero (index, s) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftDescriptor {
    pub shifts: Vec<(i32, i32)>,
}

impl ShiftDescriptor {
    /// The induced z-substitution exponents: z_i → q^{e_i} z_i with
    /// e_i = s_{i−1} − s_i, restricted to the given variable range.
    pub fn substitution(&self, range: VarRange) -> Vec<i64> {
        let s = |idx: i32| -> i64 {
            self.shifts
                .iter()
                .find(|(k, _)| *k == idx)
                .map(|(_, v)| *v as i64)
                .unwrap_or(0)
        };
        range.contents().map(|i| s(i - 1) - s(i)).collect()
    }

    /// Combined substitution of several descriptors (shifts add).
    pub fn combine(descriptors: &[&ShiftDescriptor], range: VarRange) -> Vec<i64> {
        let mut e = vec![0i64; range.len()];
        for d in descriptors {
            for (i, v) in d.substitution(range).iter().enumerate() {
                e[i] += v;
            }
        }
        e
    }

    /// How the substitution scales a z-monomial: the q-power ⟨e, zexp⟩.
    pub fn scaling_power(&self, monomial: &BoxMonomial) -> i64 {
        let e = self.substitution(monomial.range());
        e.iter().zip(monomial.zexp()).map(|(a, b)| a * b).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qseries::rat;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn profile_matches_rotated_diagram() {
        // (5,4,3,2) occupies contents −4..3 with counts (1,1,2,2,3,2,2,1)
        let prof = p("5,4,3,2").profile();
        assert_eq!(prof.lo(), -4);
        assert_eq!(prof.hi(), 3);
        assert_eq!(prof.counts(), &[1, 1, 2, 2, 3, 2, 2, 1]);

        let single = p("1").profile();
        assert_eq!((single.lo(), single.hi()), (0, 0));
        assert_eq!(single.counts(), &[1]);

        let hook = p("2,1").profile();
        assert_eq!((hook.lo(), hook.hi()), (-1, 1));
        assert_eq!(hook.counts(), &[1, 1, 1]);
    }

    #[test]
    fn stats_of_anchor_cells() {
        let la = p("5,4,3,2");
        // content 0, height 1 has arm 3 and leg 4
        let c = la.cell_at(0, 1).unwrap();
        assert_eq!((la.arm(c), la.leg(c)), (3, 4));

        let one = p("1");
        let c1 = one.cell_at(0, 1).unwrap();
        assert_eq!((c1.content(), c1.height(), one.arm(c1), one.leg(c1)), (0, 1, 0, 0));

        // the content ±1 cells of (2,2) carry (arm, leg) = (0, 1) and (1, 0)
        let sq = p("2,2");
        let pos = sq.cell_at(1, 1).unwrap();
        assert_eq!((sq.arm(pos), sq.leg(pos)), (0, 1));
        let neg = sq.cell_at(-1, 1).unwrap();
        assert_eq!((sq.arm(neg), sq.leg(neg)), (1, 0));
    }

    #[test]
    fn zeta_values_on_the_zero_column() {
        // (ħ/q)^3 ζ_0, (ħ/q)^2 ζ_2, (ħ/q) ζ_3 at heights 3, 2, 1
        let la = p("5,4,3,2");
        let z1 = la.zeta_monomial(la.cell_at(0, 1).unwrap()).unwrap();
        let z2 = la.zeta_monomial(la.cell_at(0, 2).unwrap()).unwrap();
        let z3 = la.zeta_monomial(la.cell_at(0, 3).unwrap()).unwrap();
        assert_eq!((z1.index, z1.hq), (3, 1));
        assert_eq!((z2.index, z2.hq), (2, 2));
        assert_eq!((z3.index, z3.hq), (0, 3));

        let one = p("1");
        let z = one.zeta_monomial(one.cell_at(0, 1).unwrap()).unwrap();
        assert_eq!((z.index, z.hq), (0, 1));

        // content 1, height 1 of (3,2): arm 0, so ζ_1 with one ħ/q
        let la32 = p("3,2");
        let z = la32.zeta_monomial(la32.cell_at(1, 1).unwrap()).unwrap();
        assert_eq!((z.index, z.hq), (1, 1));
    }

    #[test]
    fn hook_spans_contiguous_contents() {
        let la = p("5,4,3,2");
        // the hook with ζ_□ = (ħ/q) ζ_3 is based at content 2, height 1
        let base = la.cell_at(2, 1).unwrap();
        let hook = la.hook_cells(base).unwrap();
        assert_eq!(hook.len(), 4);
        let contents: Vec<i32> = hook.iter().map(|c| c.content()).collect();
        assert_eq!(contents, vec![0, 1, 2, 3]);

        let one = p("1");
        let c = one.cell_at(0, 1).unwrap();
        assert_eq!(one.hook_cells(c).unwrap(), vec![c]);

        let sq = p("3,3,3");
        let center = Cell::new(2, 2);
        assert_eq!(sq.hook_cells(center).unwrap().len(), 3);
    }

    #[test]
    fn z_monomial_of_the_figure_hook() {
        // z_□ = z_0 (ħ/q z_1) z_2 (ħ/q z_3) for the hook based at content 2, height 1
        let la = p("5,4,3,2");
        let m = la.z_monomial(la.cell_at(2, 1).unwrap()).unwrap();
        let range = la.var_range();
        let mut expect = vec![0i64; range.len()];
        for c in 0..=3 {
            expect[range.index(c).unwrap()] = 1;
        }
        assert_eq!(m.zexp(), &expect[..]);
        assert_eq!(m.hq(), 2);
        assert!(m.scale().is_one());

        // single cell: z_□ = z_0 with σ(0) = 0 − 1 + 1 = 0
        let one = p("1");
        let m1 = one.z_monomial(one.cell_at(0, 1).unwrap()).unwrap();
        assert_eq!(m1.zexp(), &[1]);
        assert_eq!(m1.hq(), 0);
    }

    #[test]
    fn z_monomials_of_the_square_satisfy_one_relation() {
        // the four exponent vectors of (2,2) span only a rank-3 lattice
        let sq = p("2,2");
        let rows: Vec<Vec<i64>> = sq
            .cells()
            .iter()
            .map(|c| sq.z_monomial(*c).unwrap().zexp().to_vec())
            .collect();
        assert_eq!(rows.len(), 4);
        let rank = rank_over_q(rows);
        assert_eq!(rank, 3);
    }

    fn rank_over_q(rows: Vec<Vec<i64>>) -> usize {
        let mut m: Vec<Vec<Rational>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| rat(x as i64, 1)).collect())
            .collect();
        let cols = m[0].len();
        let mut rank = 0;
        for c in 0..cols {
            if let Some(pivot) = (rank..m.len()).find(|r| !m[*r][c].is_zero()) {
                m.swap(rank, pivot);
                let inv = m[rank][c].clone().recip();
                for x in &mut m[rank] {
                    *x *= &inv;
                }
                for r in 0..m.len() {
                    if r != rank && !m[r][c].is_zero() {
                        let f = m[r][c].clone();
                        for cc in 0..cols {
                            let sub = f.clone() * &m[rank][cc];
                            m[r][cc] -= sub;
                        }
                    }
                }
                rank += 1;
            }
        }
        rank
    }

    #[test]
    fn slices_of_the_figure() {
        let la = p("5,4,3,2");
        // red: through content 1, height 1 — contents 0,1,2 at height 1
        let red = la.slice_cells(la.cell_at(1, 1).unwrap()).unwrap();
        let addrs: Vec<(i32, u32)> = red.iter().map(|c| (c.content(), c.height())).collect();
        assert_eq!(addrs, vec![(0, 1), (1, 1), (2, 1)]);
        // blue: through content −2, height 1 — contents 0,−1,−2,−3 at height 1
        let blue = la.slice_cells(la.cell_at(-2, 1).unwrap()).unwrap();
        let mut addrs: Vec<(i32, u32)> = blue.iter().map(|c| (c.content(), c.height())).collect();
        addrs.sort();
        assert_eq!(addrs, vec![(-3, 1), (-2, 1), (-1, 1), (0, 1)]);

        let one = p("1");
        let c = one.cell_at(0, 1).unwrap();
        assert_eq!(one.slice_cells(c).unwrap(), vec![c]);

        let sq = p("2,2");
        assert_eq!(sq.slice_cells(sq.cell_at(0, 1).unwrap()).unwrap().len(), 2);
    }

    #[test]
    fn shift_descriptor_small_cases() {
        // single cell: ζ_0 → q^{-1} ζ_0, i.e. z_0 → q z_0
        let one = p("1");
        let d = one.shift_descriptor(one.cell_at(0, 1).unwrap()).unwrap();
        assert_eq!(d.shifts, vec![(0, -1)]);
        assert_eq!(d.substitution(one.var_range()), vec![1]);

        // row of two: the content −1 cell shifts ζ_{−2} up
        let row = p("2");
        let d = row.shift_descriptor(row.cell_at(-1, 1).unwrap()).unwrap();
        assert_eq!(d.shifts, vec![(-2, 1)]);
        assert_eq!(d.substitution(row.var_range()), vec![1, 0]);
    }

    #[test]
    fn shift_descriptor_scales_exactly_the_slice() {
        for name in ["1", "2", "1,1", "2,1", "3,1", "2,2", "3,2,1"] {
            let la = p(name);
            for cell in la.cells() {
                let d = la.shift_descriptor(cell).unwrap();
                let slice = la.slice_cells(cell).unwrap();
                for other in la.cells() {
                    let m = la.z_monomial(other).unwrap();
                    let power = d.scaling_power(&m);
                    let expect = if slice.contains(&other) { 1 } else { 0 };
                    assert_eq!(power, expect, "λ={name} cell={cell:?} other={other:?}");
                }
            }
        }
    }

    #[test]
    fn cell_addresses_round_trip() {
        let la = p("5,4,3,2");
        for cell in la.cells() {
            let s = format_cell_address(cell);
            assert_eq!(parse_cell_address(&la, &s).unwrap(), cell);
        }
        assert!(parse_cell_address(&la, "9:1").is_err());
    }

    #[test]
    fn rejects_bad_partitions() {
        assert!("".parse::<Partition>().is_err());
        assert!("1,2".parse::<Partition>().is_err());
        assert!("2,0".parse::<Partition>().is_err());
        assert!("3,x".parse::<Partition>().is_err());
    }
}
