//! Z_q toric codes on small tori: stabilizers, ground states, anyon strings, the braiding
//! S-matrix and the extreme points of an annulus.
//!
//! Vertices and plaquettes are addressed by `(x, y)` with `0 ≤ x < Lx`, `0 ≤ y < Ly`; plaquette
//! `(x, y)` has lower-left corner `(x, y)`. Edge `2(y·Lx + x)` runs right from vertex `(x, y)` and
//! edge `2(y·Lx + x) + 1` runs up from it. Vertex operators carry `X` on outgoing edges and `X†`
//! on incoming ones; plaquette operators carry `Z` on the bottom and right edges and `Z†` on the
//! top and left edges.

use serde::{Deserialize, Serialize};

use crate::dense::{DenseState, SparseOperator, C64};
use crate::error::{Error, Result};
use crate::pauli::{phase_table, PauliLabel};
use crate::ring::factorize;
use crate::stabilizer::{extreme_points, find_rephasing_pauli, Membership, StabilizerGroup};

/// Largest number of edges accepted when building a code.
pub const MAX_TORIC_EDGES: usize = 512;
/// Tolerance for a braiding phase to count as a root of unity.
pub const QUANTIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToricLattice {
    pub q: u64,
    pub lx: usize,
    pub ly: usize,
}

impl ToricLattice {
    pub fn new(q: u64, lx: usize, ly: usize) -> Result<Self> {
        factorize(q)?;
        if lx < 2 || ly < 2 {
            return Err(Error::GeometryTooSmall(format!("{lx}x{ly} torus; both sides must be at least 2")));
        }
        if 2 * lx * ly > MAX_TORIC_EDGES {
            return Err(Error::BudgetExceeded(format!("{} edges exceed {MAX_TORIC_EDGES}", 2 * lx * ly)));
        }
        Ok(ToricLattice { q, lx, ly })
    }

    pub fn num_edges(&self) -> usize {
        2 * self.lx * self.ly
    }

    fn wrap(&self, x: i64, y: i64) -> (usize, usize) {
        (x.rem_euclid(self.lx as i64) as usize, y.rem_euclid(self.ly as i64) as usize)
    }

    pub fn horizontal(&self, x: i64, y: i64) -> usize {
        let (x, y) = self.wrap(x, y);
        2 * (y * self.lx + x)
    }

    pub fn vertical(&self, x: i64, y: i64) -> usize {
        self.horizontal(x, y) + 1
    }

    pub fn site_index(&self, x: i64, y: i64) -> usize {
        let (x, y) = self.wrap(x, y);
        y * self.lx + x
    }

    pub fn site_coords(&self, index: usize) -> (usize, usize) {
        (index % self.lx, index / self.lx)
    }

    /// Edges at a vertex with `+1` for outgoing and `−1` for incoming.
    pub fn vertex_incidence(&self, x: i64, y: i64) -> [(usize, i64); 4] {
        [
            (self.horizontal(x, y), 1),
            (self.vertical(x, y), 1),
            (self.horizontal(x - 1, y), -1),
            (self.vertical(x, y - 1), -1),
        ]
    }

    /// Boundary edges of a plaquette: bottom and right `+1`, top and left `−1`.
    pub fn plaquette_incidence(&self, x: i64, y: i64) -> [(usize, i64); 4] {
        [
            (self.horizontal(x, y), 1),
            (self.vertical(x + 1, y), 1),
            (self.horizontal(x, y + 1), -1),
            (self.vertical(x, y), -1),
        ]
    }

    pub fn star(&self, x: i64, y: i64) -> Vec<usize> {
        self.vertex_incidence(x, y).iter().map(|&(e, _)| e).collect()
    }

    pub fn plaquette_edges(&self, x: i64, y: i64) -> Vec<usize> {
        self.plaquette_incidence(x, y).iter().map(|&(e, _)| e).collect()
    }

    fn signed_label(&self, z: &[(usize, i64)], x: &[(usize, i64)], power: i64) -> PauliLabel {
        let q = self.q as i64;
        let mut p = PauliLabel::identity(self.q, self.num_edges());
        for &(e, s) in z {
            p.a[e] = (p.a[e] as i64 + s * power).rem_euclid(q) as u64;
        }
        for &(e, s) in x {
            p.b[e] = (p.b[e] as i64 + s * power).rem_euclid(q) as u64;
        }
        p
    }

    pub fn vertex_operator(&self, x: i64, y: i64) -> PauliLabel {
        self.signed_label(&[], &self.vertex_incidence(x, y), 1)
    }

    pub fn plaquette_operator(&self, x: i64, y: i64) -> PauliLabel {
        self.signed_label(&self.plaquette_incidence(x, y), &[], 1)
    }

    /// `Z` along the row `y = 0` and along the column `x = 0`.
    pub fn z_logicals(&self) -> [PauliLabel; 2] {
        let row: Vec<(usize, i64)> = (0..self.lx as i64).map(|x| (self.horizontal(x, 0), 1)).collect();
        let col: Vec<(usize, i64)> = (0..self.ly as i64).map(|y| (self.vertical(0, y), 1)).collect();
        [self.signed_label(&row, &[], 1), self.signed_label(&col, &[], 1)]
    }

    /// `X` on the vertical edges crossed by a horizontal dual loop, and on the horizontal edges
    /// crossed by a vertical one.
    pub fn x_logicals(&self) -> [PauliLabel; 2] {
        let row: Vec<(usize, i64)> = (0..self.lx as i64).map(|x| (self.vertical(x, 0), 1)).collect();
        let col: Vec<(usize, i64)> = (0..self.ly as i64).map(|y| (self.horizontal(0, y), 1)).collect();
        [self.signed_label(&[], &row, 1), self.signed_label(&[], &col, 1)]
    }
}

#[derive(Clone, Debug)]
pub struct ToricCode {
    pub lattice: ToricLattice,
    pub stabilizers: StabilizerGroup,
}

pub fn build_toric(q: u64, lx: usize, ly: usize) -> Result<ToricCode> {
    let lattice = ToricLattice::new(q, lx, ly)?;
    let mut gens = Vec::with_capacity(2 * lx * ly);
    for y in 0..ly as i64 {
        for x in 0..lx as i64 {
            gens.push(lattice.vertex_operator(x, y));
        }
    }
    for y in 0..ly as i64 {
        for x in 0..lx as i64 {
            gens.push(lattice.plaquette_operator(x, y));
        }
    }
    let stabilizers = StabilizerGroup::validate(q, lattice.num_edges(), gens)?;
    Ok(ToricCode { lattice, stabilizers })
}

impl ToricCode {
    /// Stabilizers plus the two `Z` loops fixed to eigenvalues `ω^{s₁}`, `ω^{s₂}`.
    pub fn ground_group(&self, sector: (u64, u64)) -> Result<StabilizerGroup> {
        let q = self.lattice.q;
        let [z1, z2] = self.lattice.z_logicals();
        let mut gens = self.stabilizers.generators().to_vec();
        gens.push(z1.times_omega(q - sector.0 % q));
        gens.push(z2.times_omega(q - sector.1 % q));
        StabilizerGroup::validate(q, self.lattice.num_edges(), gens)
    }

    pub fn ground_state(&self, sector: (u64, u64), limit: usize) -> Result<DenseState> {
        self.ground_group(sector)?.pure_state_limited(limit)
    }
}

/// Anyon `e^a m^b`: electric charge `a` at vertices, magnetic charge `b` at plaquettes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AnyonType {
    pub electric: u64,
    pub magnetic: u64,
}

impl AnyonType {
    pub fn new(q: u64, electric: u64, magnetic: u64) -> Self {
        AnyonType { electric: electric % q, magnetic: magnetic % q }
    }

    pub fn all(q: u64) -> Vec<AnyonType> {
        (0..q).flat_map(|a| (0..q).map(move |b| AnyonType { electric: a, magnetic: b })).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Move {
    East,
    North,
    West,
    South,
}

impl Move {
    fn offset(self) -> (i64, i64) {
        match self {
            Move::East => (1, 0),
            Move::North => (0, 1),
            Move::West => (-1, 0),
            Move::South => (0, -1),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    /// Along edges between vertices; carries `Z` strings.
    Primal,
    /// Across edges between plaquettes; carries `X` strings.
    Dual,
}

/// Edges of a lattice path with the sign each contributes to the string exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StringPath {
    pub kind: PathKind,
    /// Vertex or plaquette index where the path starts and ends.
    pub start: usize,
    pub end: usize,
    pub steps: Vec<(usize, i64)>,
}

impl StringPath {
    fn walk(lattice: &ToricLattice, kind: PathKind, start: (usize, usize), moves: &[Move]) -> Result<Self> {
        if start.0 >= lattice.lx || start.1 >= lattice.ly {
            return Err(Error::InvalidPath(format!("start {start:?} outside the {}x{} torus", lattice.lx, lattice.ly)));
        }
        let (mut x, mut y) = (start.0 as i64, start.1 as i64);
        let mut steps: Vec<(usize, i64)> = Vec::with_capacity(moves.len());
        for &m in moves {
            let step = match (kind, m) {
                (PathKind::Primal, Move::East) => (lattice.horizontal(x, y), 1),
                (PathKind::Primal, Move::West) => (lattice.horizontal(x - 1, y), -1),
                (PathKind::Primal, Move::North) => (lattice.vertical(x, y), 1),
                (PathKind::Primal, Move::South) => (lattice.vertical(x, y - 1), -1),
                (PathKind::Dual, Move::East) => (lattice.vertical(x + 1, y), 1),
                (PathKind::Dual, Move::West) => (lattice.vertical(x, y), -1),
                (PathKind::Dual, Move::North) => (lattice.horizontal(x, y + 1), -1),
                (PathKind::Dual, Move::South) => (lattice.horizontal(x, y), 1),
            };
            if steps.iter().any(|&(e, _)| e == step.0) {
                return Err(Error::InvalidPath(format!("edge {} is used twice", step.0)));
            }
            steps.push(step);
            let (dx, dy) = m.offset();
            x += dx;
            y += dy;
        }
        Ok(StringPath {
            kind,
            start: lattice.site_index(start.0 as i64, start.1 as i64),
            end: lattice.site_index(x, y),
            steps,
        })
    }

    pub fn primal(lattice: &ToricLattice, start: (usize, usize), moves: &[Move]) -> Result<Self> {
        Self::walk(lattice, PathKind::Primal, start, moves)
    }

    pub fn dual(lattice: &ToricLattice, start: (usize, usize), moves: &[Move]) -> Result<Self> {
        Self::walk(lattice, PathKind::Dual, start, moves)
    }
}

/// Primal path for the electric part and dual path for the magnetic part of an anyon string.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnyonPath {
    pub primal: Option<StringPath>,
    pub dual: Option<StringPath>,
}

/// `Z^a` along the primal path times `X^b` along the dual path, with orientation signs.
pub fn anyon_string(lattice: &ToricLattice, anyon: AnyonType, path: &AnyonPath) -> Result<PauliLabel> {
    let mut z = Vec::new();
    let mut x = Vec::new();
    if anyon.electric % lattice.q != 0 {
        let p = path.primal.as_ref().ok_or_else(|| Error::InvalidPath("electric charge needs a primal path".into()))?;
        if p.kind != PathKind::Primal {
            return Err(Error::InvalidPath("electric charge needs a primal path".into()));
        }
        z = p.steps.iter().map(|&(e, s)| (e, s * anyon.electric as i64)).collect();
    }
    if anyon.magnetic % lattice.q != 0 {
        let p = path.dual.as_ref().ok_or_else(|| Error::InvalidPath("magnetic charge needs a dual path".into()))?;
        if p.kind != PathKind::Dual {
            return Err(Error::InvalidPath("magnetic charge needs a dual path".into()));
        }
        x = p.steps.iter().map(|&(e, s)| (e, s * anyon.magnetic as i64)).collect();
    }
    if path.primal.as_ref().is_some_and(|p| p.steps.iter().any(|&(e, _)| e >= lattice.num_edges()))
        || path.dual.as_ref().is_some_and(|p| p.steps.iter().any(|&(e, _)| e >= lattice.num_edges()))
    {
        return Err(Error::InvalidPath("edge outside the lattice".into()));
    }
    Ok(lattice.signed_label(&z, &x, 1))
}

/// Strings for the braiding experiment: the first anyon pair is created along `v_down` and
/// removed along `v_up`, the second along `w_down` and `w_up`. The lower strings cross once;
/// the upper strings are disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SMatrixLayout {
    pub v_down: AnyonPath,
    pub v_up: AnyonPath,
    pub w_down: AnyonPath,
    pub w_up: AnyonPath,
}

impl SMatrixLayout {
    /// The first pair's electric string loops around plaquette `(0, 0)` and its magnetic string
    /// around a vertex `v` away from that plaquette. The second pair sits at `v` and plaquette
    /// `(0, 0)` and leaves both loops through their lower halves.
    pub fn standard(lattice: &ToricLattice) -> Result<Self> {
        let (lx, ly) = (lattice.lx as i64, lattice.ly as i64);
        let same = |a: (i64, i64), b: (i64, i64)| lattice.wrap(a.0, a.1) == lattice.wrap(b.0, b.1);
        let corners = [(0, 0), (1, 0), (1, 1), (0, 1)];
        let mut vertex = None;
        'search: for y in 0..ly {
            for x in 0..lx {
                if corners.iter().any(|&c| same(c, (x, y))) {
                    continue;
                }
                // The plaquette enclosed by the second pair's electric loop must not separate the
                // ends of its magnetic string, and the magnetic ends of the first pair must lie
                // outside the plaquette loop.
                let enclosed = (x, y);
                if same(enclosed, (0, 0)) || same(enclosed, (0, -1)) || same((x, y - 1), (0, 0)) || same((x - 1, y), (0, 0)) {
                    continue;
                }
                vertex = Some((x as usize, y as usize));
                break 'search;
            }
        }
        let Some((vx, vy)) = vertex else {
            return Err(Error::GeometryTooSmall(format!(
                "{}x{} torus has no room for the braiding strings",
                lattice.lx, lattice.ly
            )));
        };
        let below = lattice.wrap(vx as i64, vy as i64 - 1);
        let below = (below.0, below.1);
        use Move::*;
        let v_down = AnyonPath {
            primal: Some(StringPath::primal(lattice, (0, 0), &[East, North])?),
            dual: Some(StringPath::dual(lattice, below, &[North, West])?),
        };
        let v_up = AnyonPath {
            primal: Some(StringPath::primal(lattice, (0, 0), &[North, East])?),
            dual: Some(StringPath::dual(lattice, below, &[West, North])?),
        };
        let w_down = AnyonPath {
            primal: Some(StringPath::primal(lattice, (vx, vy), &[East])?),
            dual: Some(StringPath::dual(lattice, (0, 0), &[South])?),
        };
        let w_up = AnyonPath {
            primal: Some(StringPath::primal(lattice, (vx, vy), &[North, East, South])?),
            dual: Some(StringPath::dual(lattice, (0, 0), &[East, South, West])?),
        };
        Ok(SMatrixLayout { v_down, v_up, w_down, w_up })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BraidingPhase {
    pub re: f64,
    pub im: f64,
    /// `k` with the phase closest to `ω^k`, `ω = e^{2πi/q}`.
    pub exponent: u64,
    /// Distance from the phase to `ω^k`.
    pub deviation: f64,
}

impl BraidingPhase {
    fn from_value(z: C64, q: u64) -> Self {
        let roots = phase_table(q);
        let (exponent, deviation) = (0..q)
            .map(|k| (k, (z - roots[2 * k as usize]).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("q ≥ 2");
        BraidingPhase { re: z.re, im: z.im, exponent, deviation }
    }

    pub fn value(&self) -> C64 {
        C64::new(self.re, self.im)
    }
}

/// The operator `W_u† V_u† V_d W_d` whose ground-state expectation is the braiding phase.
pub fn s_matrix_operator(
    lattice: &ToricLattice,
    layout: &SMatrixLayout,
    first: AnyonType,
    second: AnyonType,
) -> Result<PauliLabel> {
    let vd = anyon_string(lattice, first, &layout.v_down)?;
    let vu = anyon_string(lattice, first, &layout.v_up)?;
    let wd = anyon_string(lattice, second, &layout.w_down)?;
    let wu = anyon_string(lattice, second, &layout.w_up)?;
    wu.adjoint().compose(&vu.adjoint())?.compose(&vd)?.compose(&wd)
}

pub fn s_matrix_element_with(
    code: &ToricCode,
    layout: &SMatrixLayout,
    first: AnyonType,
    second: AnyonType,
) -> Result<BraidingPhase> {
    let lattice = &code.lattice;
    let ground = code.ground_group((0, 0))?;
    // Each pair created and removed on its own must leave the ground state unchanged.
    for (t, down, up) in [(first, &layout.v_down, &layout.v_up), (second, &layout.w_down, &layout.w_up)] {
        let closed = anyon_string(lattice, t, up)?.adjoint().compose(&anyon_string(lattice, t, down)?)?;
        let z = ground.pauli_expectation(&closed);
        if (z - C64::new(1.0, 0.0)).norm() > QUANTIZATION_TOLERANCE {
            return Err(Error::InvalidPath(format!("strings for {t:?} do not close into a stabilizer (⟨loop⟩ = {z})")));
        }
    }
    let op = s_matrix_operator(lattice, layout, first, second)?;
    let z = ground.pauli_expectation(&op);
    if (z.norm() - 1.0).abs() > QUANTIZATION_TOLERANCE {
        return Err(Error::Internal(format!("braiding expectation {z} is not a phase")));
    }
    Ok(BraidingPhase::from_value(z, lattice.q))
}

pub fn s_matrix_element(code: &ToricCode, first: AnyonType, second: AnyonType) -> Result<BraidingPhase> {
    let layout = SMatrixLayout::standard(&code.lattice)?;
    s_matrix_element_with(code, &layout, first, second)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SMatrixEntry {
    pub first: AnyonType,
    pub second: AnyonType,
    pub phase: BraidingPhase,
    pub quantized: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuantizationReport {
    pub q: u64,
    pub lx: usize,
    pub ly: usize,
    pub entries: Vec<SMatrixEntry>,
    pub all_quantized: bool,
    /// Exponent of the `(e, m)` entry, which fixes the orientation convention.
    pub reference_exponent: u64,
    /// Whether every entry equals `ω^{s(a d + b c)}` for `(e^a m^b, e^c m^d)`, with `ω^s` the reference entry.
    pub bilinear: bool,
}

/// Braiding phases for the given pairs, or all `q² × q²` pairs, checked against the `q`-th roots of unity.
pub fn quantization_check(code: &ToricCode, pairs: Option<&[(AnyonType, AnyonType)]>) -> Result<QuantizationReport> {
    let lattice = &code.lattice;
    let q = lattice.q;
    let layout = SMatrixLayout::standard(lattice)?;
    let all: Vec<(AnyonType, AnyonType)>;
    let pairs = match pairs {
        Some(p) => p,
        None => {
            let types = AnyonType::all(q);
            all = types.iter().flat_map(|&s| types.iter().map(move |&t| (s, t))).collect();
            &all
        }
    };
    let e = AnyonType::new(q, 1, 0);
    let m = AnyonType::new(q, 0, 1);
    let reference_exponent = s_matrix_element_with(code, &layout, e, m)?.exponent;
    let mut entries = Vec::with_capacity(pairs.len());
    let mut bilinear = true;
    for &(s, t) in pairs {
        let (s, t) = (AnyonType::new(q, s.electric, s.magnetic), AnyonType::new(q, t.electric, t.magnetic));
        let phase = s_matrix_element_with(code, &layout, s, t)?;
        let quantized = phase.deviation <= QUANTIZATION_TOLERANCE;
        let cross = (s.electric * t.magnetic + s.magnetic * t.electric) % q;
        bilinear &= quantized && phase.exponent == reference_exponent * cross % q;
        entries.push(SMatrixEntry { first: s, second: t, phase, quantized });
    }
    let all_quantized = entries.iter().all(|e| e.quantized);
    Ok(QuantizationReport { q, lx: lattice.lx, ly: lattice.ly, entries, all_quantized, reference_exponent, bilinear })
}

/// An annulus of edges with its thickening and the strings used to probe its sectors.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusGeometry {
    pub annulus: Vec<usize>,
    pub thickened: Vec<usize>,
    /// Electric and magnetic strings from inside the hole to beyond the thickening.
    pub probe: AnyonPath,
}

/// The eight edges around the edge from vertex `(1, 1)` to `(2, 1)`, thickened by every edge
/// sharing a vertex with them. Needs a torus of at least 4×4.
pub fn standard_annulus(lattice: &ToricLattice) -> Result<AnnulusGeometry> {
    if lattice.lx < 4 || lattice.ly < 4 {
        return Err(Error::GeometryTooSmall(format!("annulus needs a 4x4 torus, got {}x{}", lattice.lx, lattice.ly)));
    }
    let hole = lattice.horizontal(1, 1);
    let mut annulus: Vec<usize> = [lattice.star(1, 1), lattice.star(2, 1), lattice.plaquette_edges(1, 0), lattice.plaquette_edges(1, 1)]
        .concat()
        .into_iter()
        .filter(|&e| e != hole)
        .collect();
    annulus.sort_unstable();
    annulus.dedup();
    let endpoints = |e: usize| -> [usize; 2] {
        let (x, y) = lattice.site_coords(e / 2);
        let (x, y) = (x as i64, y as i64);
        let other = if e % 2 == 0 { lattice.site_index(x + 1, y) } else { lattice.site_index(x, y + 1) };
        [lattice.site_index(x, y), other]
    };
    let touched: Vec<usize> = annulus.iter().flat_map(|&e| endpoints(e)).collect();
    let thickened: Vec<usize> = (0..lattice.num_edges())
        .filter(|&e| e != hole && endpoints(e).iter().any(|v| touched.contains(v)))
        .collect();
    use Move::*;
    let probe = AnyonPath {
        primal: Some(StringPath::primal(lattice, (1, 1), &[North, North])?),
        dual: Some(StringPath::dual(lattice, (1, 1), &[North, North])?),
    };
    Ok(AnnulusGeometry { annulus, thickened, probe })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusPoint {
    pub phases: Vec<u64>,
    /// Generators of the point's stabilizer group on the annulus sites.
    pub generators: Vec<String>,
    /// Anyon whose string through the annulus produces this point, if a probe was given.
    pub anyon: Option<AnyonType>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusReport {
    pub q: u64,
    pub annulus: Vec<usize>,
    pub thickened: Vec<usize>,
    pub free_generators: Vec<String>,
    pub points: Vec<AnnulusPoint>,
    pub expected_points: u64,
    pub count_matches: bool,
    pub vacuum_is_reference: bool,
    /// Largest Frobenius norm of `[ρ_u, ρ_v]` over all pairs of points.
    pub max_commutator: f64,
    pub commuting: bool,
    pub rephasing_verified: bool,
    /// Every anyon type reaches a distinct point; `None` without a probe.
    pub anyons_match: Option<bool>,
}

fn same_group(a: &StabilizerGroup, b: &StabilizerGroup) -> bool {
    a.order() == b.order()
        && a.independent_generators().iter().all(|(g, _)| b.member(g) == Membership::PhaseExact)
}

/// Ground-state reduction of `P|ψ⟩` on the annulus for a Pauli `P`.
fn conjugated_reduction(ground: &StabilizerGroup, p: &PauliLabel, annulus: &[usize]) -> Result<StabilizerGroup> {
    let gens: Vec<PauliLabel> = ground.generators().iter().map(|g| p.conjugate(g)).collect::<Result<_>>()?;
    let moved = StabilizerGroup::validate(ground.q(), ground.n(), gens)?;
    moved.supported_subgroup(annulus)?.restrict(annulus)
}

/// Extreme points of the information convex set of the ground state on an annulus, with the
/// checks that they number `q²`, commute, are related by Paulis on the annulus and, given a
/// probe, are the reductions of states carrying one anyon through the annulus.
pub fn annulus_extreme_points(
    code: &ToricCode,
    annulus: &[usize],
    thickened: &[usize],
    probe: Option<&AnyonPath>,
) -> Result<AnnulusReport> {
    let lattice = &code.lattice;
    let q = lattice.q;
    let ground = code.ground_group((0, 0))?;
    let mut balls = Vec::new();
    for y in 0..lattice.ly as i64 {
        for x in 0..lattice.lx as i64 {
            for ball in [lattice.star(x, y), lattice.plaquette_edges(x, y)] {
                if ball.iter().all(|e| thickened.contains(e)) {
                    balls.push(ball);
                }
            }
        }
    }
    let ext = extreme_points(&ground, thickened, annulus, &balls)?;
    if ext.free_generators.len() != 2 || ext.free_generators.iter().any(|&(_, d)| d != q) {
        return Err(Error::NotAnAnnulus(format!(
            "expected two free generators of order {q}, found orders {:?}",
            ext.free_generators.iter().map(|(_, d)| *d).collect::<Vec<_>>()
        )));
    }
    let restricted: Vec<StabilizerGroup> = ext.points.iter().map(|(_, g)| g.restrict(annulus)).collect::<Result<_>>()?;
    let vacuum_is_reference = same_group(&restricted[0], &ground.supported_subgroup(annulus)?.restrict(annulus)?);

    let sparse: Vec<SparseOperator> = restricted.iter().map(|g| g.sps_sparse()).collect::<Result<_>>()?;
    let mut max_commutator: f64 = 0.0;
    for i in 0..sparse.len() {
        for j in i + 1..sparse.len() {
            max_commutator = max_commutator.max(sparse[i].commutator(&sparse[j])?.frobenius_norm());
        }
    }

    let local: Vec<PauliLabel> =
        ext.local.restrict(annulus)?.independent_generators().into_iter().map(|(g, _)| g).collect();
    let free: Vec<PauliLabel> = ext
        .free_generators
        .iter()
        .map(|(g, _)| StabilizerGroup::validate(q, lattice.num_edges(), vec![g.clone()])?.restrict(annulus))
        .map(|g| g.map(|g| g.generators()[0].clone()))
        .collect::<Result<_>>()?;
    let mut gens = local.clone();
    gens.extend(free.iter().cloned());
    let mut rephasing_verified = true;
    for (i, (u, _)) in ext.points.iter().enumerate() {
        for (j, (v, _)) in ext.points.iter().enumerate() {
            let mut targets = vec![0; local.len()];
            targets.extend(u.iter().zip(v).map(|(&a, &b)| (a + q - b) % q));
            let p = find_rephasing_pauli(&gens, &targets)?;
            let moved: Vec<PauliLabel> =
                restricted[i].independent_generators().iter().map(|(g, _)| p.conjugate(g)).collect::<Result<_>>()?;
            let image = StabilizerGroup::validate(q, annulus.len(), moved)?;
            rephasing_verified &= same_group(&image, &restricted[j]);
        }
    }

    let mut anyon_of = vec![None; ext.points.len()];
    let anyons_match = match probe {
        None => None,
        Some(path) => {
            let mut ok = true;
            for t in AnyonType::all(q) {
                let p = anyon_string(lattice, t, path)?;
                let reduced = conjugated_reduction(&ground, &p, annulus)?;
                match restricted.iter().position(|g| same_group(g, &reduced)) {
                    Some(k) if anyon_of[k].is_none() => anyon_of[k] = Some(t),
                    _ => ok = false,
                }
            }
            Some(ok && anyon_of.iter().all(Option::is_some))
        }
    };

    let points = ext
        .points
        .iter()
        .zip(&restricted)
        .zip(&anyon_of)
        .map(|(((u, _), g), &anyon)| AnnulusPoint {
            phases: u.clone(),
            generators: g.independent_generators().iter().map(|(h, _)| h.to_string()).collect(),
            anyon,
        })
        .collect::<Vec<_>>();
    let expected_points = q * q;
    Ok(AnnulusReport {
        q,
        annulus: annulus.to_vec(),
        thickened: thickened.to_vec(),
        free_generators: ext.free_generators.iter().map(|(g, _)| g.to_string()).collect(),
        count_matches: points.len() as u64 == expected_points,
        points,
        expected_points,
        vacuum_is_reference,
        max_commutator,
        commuting: max_commutator < 1e-10,
        rephasing_verified,
        anyons_match,
    })
}
