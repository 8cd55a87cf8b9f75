use std::fmt;

use thiserror::Error;

/// Largest number of directions a [`ZonogonSpec`] may have.
pub const MAX_DIRECTIONS: usize = 12;

/// Largest side multiplicity accepted for a single direction.
pub const MAX_MULTIPLICITY: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error("need at least 3 directions, got {0}")]
    TooFewDirections(usize),
    #[error("at most {MAX_DIRECTIONS} directions are supported, got {0}")]
    TooManyDirections(usize),
    #[error("side multiplicity a_{index} = {value} must be between 1 and {MAX_MULTIPLICITY}")]
    BadMultiplicity { index: usize, value: u32 },
}

/// A point of the plane with exact integer coordinates.
///
/// Direction vectors are stored with denominators cleared, so every projected
/// lattice point lands on an integer point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanarPoint {
    pub x: i64,
    pub y: i64,
}

impl PlanarPoint {
    pub const ORIGIN: PlanarPoint = PlanarPoint { x: 0, y: 0 };

    pub fn new(x: i64, y: i64) -> Self {
        PlanarPoint { x, y }
    }

    pub fn cross(self, other: PlanarPoint) -> i128 {
        self.x as i128 * other.y as i128 - self.y as i128 * other.x as i128
    }

    pub fn dot(self, other: PlanarPoint) -> i128 {
        self.x as i128 * other.x as i128 + self.y as i128 * other.y as i128
    }
}

impl std::ops::Add for PlanarPoint {
    type Output = PlanarPoint;
    fn add(self, o: PlanarPoint) -> PlanarPoint {
        PlanarPoint::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for PlanarPoint {
    type Output = PlanarPoint;
    fn sub(self, o: PlanarPoint) -> PlanarPoint {
        PlanarPoint::new(self.x - o.x, self.y - o.y)
    }
}

impl std::ops::Neg for PlanarPoint {
    type Output = PlanarPoint;
    fn neg(self) -> PlanarPoint {
        PlanarPoint::new(-self.x, -self.y)
    }
}

impl std::ops::Mul<i64> for PlanarPoint {
    type Output = PlanarPoint;
    fn mul(self, k: i64) -> PlanarPoint {
        PlanarPoint::new(self.x * k, self.y * k)
    }
}

/// A point `(i_1, ..., i_n)` of the integer box. Directions are 0-based
/// internally; the JSON surface uses 1-based indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint {
    coords: [u8; MAX_DIRECTIONS],
    len: u8,
}

impl LatticePoint {
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_DIRECTIONS);
        LatticePoint {
            coords: [0; MAX_DIRECTIONS],
            len: n as u8,
        }
    }

    /// Builds a point from explicit coordinates. Panics on coordinates that do
    /// not fit; use [`ZonogonSpec::point`] for checked construction.
    pub fn new(coords: &[u32]) -> Self {
        let mut p = LatticePoint::zero(coords.len());
        for (i, &c) in coords.iter().enumerate() {
            p.coords[i] = u8::try_from(c).expect("lattice coordinate out of range");
        }
        p
    }

    /// The unit vector `e_j` (0-based `j`).
    pub fn unit(n: usize, j: usize) -> Self {
        let mut p = LatticePoint::zero(n);
        p.coords[j] = 1;
        p
    }

    pub fn n(&self) -> usize {
        self.len as usize
    }

    pub fn coords(&self) -> &[u8] {
        &self.coords[..self.len as usize]
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.coords().iter().map(|&c| c as u32).collect()
    }

    pub fn get(&self, j: usize) -> u32 {
        self.coords[j] as u32
    }

    /// Coordinate sum, the height function used throughout the flip calculus.
    pub fn weight(&self) -> u32 {
        self.coords().iter().map(|&c| c as u32).sum()
    }

    pub fn is_even(&self) -> bool {
        self.weight() % 2 == 0
    }

    pub fn plus(&self, j: usize) -> Self {
        let mut p = *self;
        p.coords[j] = p.coords[j].checked_add(1).expect("coordinate overflow");
        p
    }

    pub fn minus(&self, j: usize) -> Option<Self> {
        let mut p = *self;
        p.coords[j] = p.coords[j].checked_sub(1)?;
        Some(p)
    }

    pub fn plus_all(&self, dirs: &[usize]) -> Self {
        dirs.iter().fold(*self, |p, &j| p.plus(j))
    }

    pub fn with(&self, j: usize, value: u32) -> Self {
        let mut p = *self;
        p.coords[j] = u8::try_from(value).expect("lattice coordinate out of range");
        p
    }

    /// Comma-joined coordinates, the variable key used by the JSON formats.
    pub fn key(&self) -> String {
        self.coords()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_key(s: &str) -> Option<Self> {
        let coords: Option<Vec<u32>> = s.split(',').map(|t| t.trim().parse().ok()).collect();
        let coords = coords?;
        if coords.is_empty() || coords.len() > MAX_DIRECTIONS || coords.iter().any(|&c| c > 255) {
            return None;
        }
        Some(LatticePoint::new(&coords))
    }
}

impl fmt::Debug for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.key())
    }
}

/// The segment from `base` to `base + e_dir`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub base: LatticePoint,
    pub dir: usize,
}

impl Edge {
    pub fn new(base: LatticePoint, dir: usize) -> Self {
        Edge { base, dir }
    }

    pub fn top(&self) -> LatticePoint {
        self.base.plus(self.dir)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.base, self.top())
    }
}

/// The unit 2-face `{base + x e_lo + y e_hi}` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rhombus {
    pub base: LatticePoint,
    pub lo: usize,
    pub hi: usize,
}

impl Rhombus {
    pub fn new(base: LatticePoint, j: usize, k: usize) -> Self {
        assert_ne!(j, k, "rhombus needs two distinct directions");
        Rhombus {
            base,
            lo: j.min(k),
            hi: j.max(k),
        }
    }

    /// Corners in cyclic order: base, base+e_lo, base+e_lo+e_hi, base+e_hi.
    pub fn corners(&self) -> [LatticePoint; 4] {
        let a = self.base;
        let b = a.plus(self.lo);
        let c = b.plus(self.hi);
        let d = a.plus(self.hi);
        [a, b, c, d]
    }

    pub fn top(&self) -> LatticePoint {
        self.base.plus(self.lo).plus(self.hi)
    }

    pub fn edges(&self) -> [Edge; 4] {
        [
            Edge::new(self.base, self.lo),
            Edge::new(self.base, self.hi),
            Edge::new(self.base.plus(self.hi), self.lo),
            Edge::new(self.base.plus(self.lo), self.hi),
        ]
    }

    pub fn has_corner(&self, p: &LatticePoint) -> bool {
        self.corners().contains(p)
    }

    /// The corner diagonally opposite `p`, if `p` is a corner.
    pub fn opposite(&self, p: &LatticePoint) -> Option<LatticePoint> {
        let c = self.corners();
        c.iter().position(|q| q == p).map(|i| c[(i + 2) % 4])
    }
}

impl fmt::Display for Rhombus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {{{},{}}}]", self.base, self.lo + 1, self.hi + 1)
    }
}

/// Side multiplicities `A` together with the planar direction vectors.
///
/// Direction `i` (1-based) uses the tangent half-angle `t_i = i/(n+1-i)`;
/// with `t = p/q` the vector `(q^2 - p^2, 2pq)` points at angle `2 atan t`,
/// which is strictly increasing in `i` and stays inside `(0, pi)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ZonogonSpec {
    a: Vec<u32>,
    v: Vec<PlanarPoint>,
}

impl ZonogonSpec {
    pub fn new(a: &[u32]) -> Result<Self, SpecError> {
        let n = a.len();
        if n < 3 {
            return Err(SpecError::TooFewDirections(n));
        }
        if n > MAX_DIRECTIONS {
            return Err(SpecError::TooManyDirections(n));
        }
        if let Some((index, &value)) = a
            .iter()
            .enumerate()
            .find(|(_, &x)| x == 0 || x > MAX_MULTIPLICITY)
        {
            return Err(SpecError::BadMultiplicity { index: index + 1, value });
        }
        let v = (1..=n as i64)
            .map(|i| {
                let (p, q) = (i, n as i64 + 1 - i);
                PlanarPoint::new(q * q - p * p, 2 * p * q)
            })
            .collect();
        Ok(ZonogonSpec { a: a.to_vec(), v })
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    pub fn direction(&self, j: usize) -> PlanarPoint {
        self.v[j]
    }

    pub fn directions(&self) -> &[PlanarPoint] {
        &self.v
    }

    pub fn contains(&self, p: &LatticePoint) -> bool {
        p.n() == self.n() && p.coords().iter().zip(&self.a).all(|(&c, &a)| c as u32 <= a)
    }

    /// Checked lattice point constructor.
    pub fn point(&self, coords: &[u32]) -> Option<LatticePoint> {
        if coords.len() != self.n() || coords.iter().zip(&self.a).any(|(c, a)| c > a) {
            return None;
        }
        Some(LatticePoint::new(coords))
    }

    pub fn zero(&self) -> LatticePoint {
        LatticePoint::zero(self.n())
    }

    pub fn top(&self) -> LatticePoint {
        LatticePoint::new(&self.a)
    }

    pub fn unit(&self, j: usize) -> LatticePoint {
        LatticePoint::unit(self.n(), j)
    }

    /// `p + e_j` if it stays inside the box.
    pub fn step_up(&self, p: &LatticePoint, j: usize) -> Option<LatticePoint> {
        (p.get(j) < self.a[j]).then(|| p.plus(j))
    }

    pub fn project(&self, p: &LatticePoint) -> PlanarPoint {
        p.coords()
            .iter()
            .zip(&self.v)
            .fold(PlanarPoint::ORIGIN, |acc, (&c, &v)| acc + v * c as i64)
    }

    pub fn height(&self, p: &LatticePoint) -> i64 {
        self.project(p).y
    }

    /// Every point of the box, in lexicographic order.
    pub fn points(&self) -> Vec<LatticePoint> {
        let n = self.n();
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        loop {
            out.push(LatticePoint::new(&cur));
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < self.a[i] {
                    cur[i] += 1;
                    for c in cur.iter_mut().skip(i + 1) {
                        *c = 0;
                    }
                    break;
                }
            }
        }
    }

    pub fn lattice_size(&self) -> usize {
        self.a.iter().map(|&a| a as usize + 1).product()
    }

    /// `sum_{i<j} a_i a_j`, the number of rhombi in any tiling.
    pub fn rhombus_count(&self) -> usize {
        let mut total = 0;
        for i in 0..self.n() {
            for j in i + 1..self.n() {
                total += (self.a[i] * self.a[j]) as usize;
            }
        }
        total
    }

    /// `sum_{i<j} a_i a_j + sum a_i + 1`, the number of vertices of any tiling.
    pub fn vertex_count(&self) -> usize {
        self.rhombus_count() + self.a.iter().map(|&a| a as usize).sum::<usize>() + 1
    }

    pub fn is_boundary_edge(&self, e: &Edge) -> bool {
        let c = e.base.coords();
        let j = e.dir;
        if c[j] as u32 >= self.a[j] {
            return false;
        }
        let right = (0..j).all(|i| c[i] as u32 == self.a[i]) && (j + 1..self.n()).all(|i| c[i] == 0);
        let left = (0..j).all(|i| c[i] == 0) && (j + 1..self.n()).all(|i| c[i] as u32 == self.a[i]);
        right || left
    }

    pub fn is_boundary_vertex(&self, p: &LatticePoint) -> bool {
        let c = p.coords();
        let n = self.n();
        // On the right chain: a full prefix, then one partial coordinate, then zeros.
        let full_prefix = (0..n).take_while(|&i| c[i] as u32 == self.a[i]).count();
        let right = full_prefix == n || (full_prefix + 1..n).all(|i| c[i] == 0);
        let zero_prefix = (0..n).take_while(|&i| c[i] == 0).count();
        let left = zero_prefix == n || (zero_prefix + 1..n).all(|i| c[i] as u32 == self.a[i]);
        right || left
    }

    /// The `2 sum a_i` boundary edges: the right chain (`e_1` first) followed by
    /// the left chain (`e_n` first), both walked upward from the origin.
    pub fn boundary_edges(&self) -> Vec<Edge> {
        let n = self.n();
        let mut out = Vec::new();
        let mut p = self.zero();
        for j in 0..n {
            for _ in 0..self.a[j] {
                out.push(Edge::new(p, j));
                p = p.plus(j);
            }
        }
        let mut p = self.zero();
        for j in (0..n).rev() {
            for _ in 0..self.a[j] {
                out.push(Edge::new(p, j));
                p = p.plus(j);
            }
        }
        out
    }

    pub fn boundary_vertices(&self) -> Vec<LatticePoint> {
        let mut out: Vec<LatticePoint> = self.boundary_edges().iter().flat_map(|e| [e.base, e.top()]).collect();
        out.sort();
        out.dedup();
        out
    }

    /// All rhombi of the box (2-faces of the cube complex).
    pub fn all_rhombi(&self) -> Vec<Rhombus> {
        let mut out = Vec::new();
        for base in self.points() {
            for j in 0..self.n() {
                for k in j + 1..self.n() {
                    if base.get(j) < self.a[j] && base.get(k) < self.a[k] {
                        out.push(Rhombus::new(base, j, k));
                    }
                }
            }
        }
        out
    }

    pub fn contains_rhombus(&self, r: &Rhombus) -> bool {
        r.lo < r.hi && r.hi < self.n() && self.contains(&r.top())
    }
}
