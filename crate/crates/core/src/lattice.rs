//! Lattice geometry on `Z^d`: sites, finite volumes, ℓ∞ distances,
//! nearest-neighbour connectivity, boundary envelopes and spin
//! configurations.
//!
//! Volumes carry a fixed lexicographic site ordering. That ordering is the
//! tensor-factor ordering used by every operator built on the volume.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{domain, Error, Result};

/// Default cap on the number of qubits in a volume.
pub const DEFAULT_MAX_QUBITS: usize = 12;

/// Largest number of candidate filler cells `connected_span_size` enumerates.
pub const SPAN_SEARCH_BOUND: usize = 20;

/// A site of `Z^d`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Site(Vec<i64>);

impl Site {
    pub fn new(coords: impl Into<Vec<i64>>) -> Self {
        let coords = coords.into();
        assert!(!coords.is_empty(), "a site needs at least one coordinate");
        Site(coords)
    }

    /// The origin of `Z^d`.
    pub fn origin(dim: usize) -> Self {
        Site::new(vec![0; dim])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn linf_distance(&self, other: &Site) -> u64 {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.abs_diff(*b))
            .max()
            .unwrap_or(0)
    }

    pub fn l1_distance(&self, other: &Site) -> u64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.abs_diff(*b)).sum()
    }

    pub fn offset(&self, shift: &Site) -> Site {
        debug_assert_eq!(self.dim(), shift.dim());
        Site(self.0.iter().zip(&shift.0).map(|(a, b)| a + b).collect())
    }

    pub fn negated(&self) -> Site {
        Site(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Debug for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<i64> for Site {
    fn from(x: i64) -> Self {
        Site(vec![x])
    }
}

/// A finite set of distinct sites with lexicographic ordering.
#[derive(Clone, Debug)]
pub struct Volume {
    dim: usize,
    sites: Vec<Site>,
    positions: HashMap<Site, usize>,
}

impl Volume {
    /// Builds a volume from arbitrary distinct sites; they are sorted
    /// lexicographically.
    pub fn from_sites(sites: impl IntoIterator<Item = Site>) -> Result<Self> {
        let mut sites: Vec<Site> = sites.into_iter().collect();
        let Some(first) = sites.first() else {
            return domain("a volume needs at least one site");
        };
        let dim = first.dim();
        if sites.iter().any(|s| s.dim() != dim) {
            return domain("sites of a volume must share one dimension");
        }
        sites.sort();
        if sites.windows(2).any(|w| w[0] == w[1]) {
            return domain("sites of a volume must be pairwise distinct");
        }
        let positions = sites.iter().cloned().enumerate().map(|(k, s)| (s, k)).collect();
        Ok(Volume { dim, sites, positions })
    }

    /// The hypercube `[-n, n]^d`.
    pub fn hypercube(n: u32, dim: usize, max_qubits: usize) -> Result<Self> {
        if dim == 0 {
            return domain("lattice dimension must be at least 1");
        }
        let side = 2 * n as usize + 1;
        let count = side
            .checked_pow(dim as u32)
            .filter(|&c| c <= max_qubits)
            .ok_or(Error::SizeLimit {
                sites: side.saturating_pow(dim as u32),
                cap: max_qubits,
            })?;
        let n = n as i64;
        let mut sites = Vec::with_capacity(count);
        let mut coords = vec![-n; dim];
        loop {
            sites.push(Site::new(coords.clone()));
            // odometer increment, last coordinate fastest
            let mut axis = dim;
            loop {
                if axis == 0 {
                    return Volume::from_sites(sites);
                }
                axis -= 1;
                if coords[axis] < n {
                    coords[axis] += 1;
                    break;
                }
                coords[axis] = -n;
            }
        }
    }

    /// The one-dimensional chain `{0, 1, ..., len-1}`.
    pub fn chain(len: usize, max_qubits: usize) -> Result<Self> {
        if len == 0 {
            return domain("a chain needs at least one site");
        }
        if len > max_qubits {
            return Err(Error::SizeLimit { sites: len, cap: max_qubits });
        }
        Volume::from_sites((0..len as i64).map(Site::from))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    /// Tensor-factor position of `site`, if it belongs to the volume.
    pub fn position(&self, site: &Site) -> Option<usize> {
        self.positions.get(site).copied()
    }

    pub fn contains(&self, site: &Site) -> bool {
        self.positions.contains_key(site)
    }
}

/// One spin-1/2 value, `j_x ∈ {+1, -1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub fn value(self) -> i8 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }

    /// Basis bit: `Up ↔ 0`, `Down ↔ 1`.
    pub fn bit(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }

    pub fn from_bit(bit: usize) -> Self {
        if bit & 1 == 0 {
            Spin::Up
        } else {
            Spin::Down
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Spin::Up => '+',
            Spin::Down => '-',
        }
    }
}

/// An assignment of spins to a finite set of sites.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Configuration {
    values: BTreeMap<Site, Spin>,
}

impl Configuration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn uniform<'a>(sites: impl IntoIterator<Item = &'a Site>, spin: Spin) -> Self {
        Configuration {
            values: sites.into_iter().map(|s| (s.clone(), spin)).collect(),
        }
    }

    pub fn set(&mut self, site: Site, spin: Spin) {
        self.values.insert(site, spin);
    }

    pub fn get(&self, site: &Site) -> Option<Spin> {
        self.values.get(site).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Site, Spin)> {
        self.values.iter().map(|(s, v)| (s, *v))
    }

    /// Merges `other` into `self`; values already present win.
    pub fn joined(mut self, other: &Configuration) -> Self {
        for (s, v) in &other.values {
            self.values.entry(s.clone()).or_insert(*v);
        }
        self
    }

    pub fn flipped(&self) -> Self {
        Configuration {
            values: self.values.iter().map(|(s, v)| (s.clone(), v.flipped())).collect(),
        }
    }

    pub fn translated(&self, shift: &Site) -> Self {
        Configuration {
            values: self.values.iter().map(|(s, v)| (s.offset(shift), *v)).collect(),
        }
    }
}

impl FromIterator<(Site, Spin)> for Configuration {
    fn from_iter<I: IntoIterator<Item = (Site, Spin)>>(iter: I) -> Self {
        Configuration { values: iter.into_iter().collect() }
    }
}

/// ℓ∞ diameter: the largest coordinate difference over all pairs.
pub fn linf_diameter<'a>(sites: impl IntoIterator<Item = &'a Site>) -> Result<u64> {
    let mut iter = sites.into_iter();
    let Some(first) = iter.next() else {
        return domain("diameter of an empty site set");
    };
    // max pairwise coordinate difference == max over axes of (max - min)
    let mut lo = first.coords().to_vec();
    let mut hi = lo.clone();
    for s in iter {
        for (axis, &c) in s.coords().iter().enumerate() {
            lo[axis] = lo[axis].min(c);
            hi[axis] = hi[axis].max(c);
        }
    }
    Ok(lo.iter().zip(&hi).map(|(a, b)| a.abs_diff(*b)).max().unwrap_or(0))
}

/// Whether `sites` is connected under ℓ¹-distance-1 adjacency.
pub fn is_connected(sites: &BTreeSet<Site>) -> bool {
    let Some(start) = sites.iter().next() else {
        return true;
    };
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([start.clone()]);
    seen.insert(start.clone());
    while let Some(s) = queue.pop_front() {
        for t in sites {
            if !seen.contains(t) && s.l1_distance(t) == 1 {
                seen.insert(t.clone());
                queue.push_back(t.clone());
            }
        }
    }
    seen.len() == sites.len()
}

/// Size of the smallest nearest-neighbour-connected superset of `sites`.
///
/// A minimal connected superset always fits in the bounding box of `sites`
/// (clamping coordinates into the box maps lattice paths to lattice
/// paths), so the search enumerates filler subsets of the box by
/// increasing size.
pub fn connected_span_size(sites: &BTreeSet<Site>) -> Result<usize> {
    if sites.is_empty() {
        return domain("connected span of an empty site set");
    }
    if is_connected(sites) {
        return Ok(sites.len());
    }
    let dim = sites.iter().next().map(Site::dim).unwrap_or(1);
    let mut lo = vec![i64::MAX; dim];
    let mut hi = vec![i64::MIN; dim];
    for s in sites {
        for (axis, &c) in s.coords().iter().enumerate() {
            lo[axis] = lo[axis].min(c);
            hi[axis] = hi[axis].max(c);
        }
    }
    let mut box_cells = 1usize;
    for axis in 0..dim {
        box_cells = box_cells.saturating_mul((hi[axis] - lo[axis] + 1) as usize);
    }
    let spare = box_cells - sites.len();
    if spare > SPAN_SEARCH_BOUND {
        return Err(Error::Capability(format!(
            "connected span search needs {spare} candidate cells, bound is {SPAN_SEARCH_BOUND}"
        )));
    }
    let candidates: Vec<Site> = box_sites(&lo, &hi).into_iter().filter(|s| !sites.contains(s)).collect();
    for extra in 1..=candidates.len() {
        let mut chosen: Vec<usize> = (0..extra).collect();
        loop {
            let mut trial = sites.clone();
            trial.extend(chosen.iter().map(|&k| candidates[k].clone()));
            if is_connected(&trial) {
                return Ok(trial.len());
            }
            if !next_combination(&mut chosen, candidates.len()) {
                break;
            }
        }
    }
    // the full box is connected, so the loop above always returns
    Ok(box_cells)
}

fn box_sites(lo: &[i64], hi: &[i64]) -> Vec<Site> {
    let mut out = Vec::new();
    let mut coords = lo.to_vec();
    loop {
        out.push(Site::new(coords.clone()));
        let mut axis = lo.len();
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if coords[axis] < hi[axis] {
                coords[axis] += 1;
                break;
            }
            coords[axis] = lo[axis];
        }
    }
}

/// Advances `idx` to the next k-combination of `0..n` in lexicographic order.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Sites outside `volume` within ℓ∞ distance `range` of it.
pub fn boundary_envelope(volume: &Volume, range: u64) -> BTreeSet<Site> {
    let mut out = BTreeSet::new();
    if range == 0 {
        return out;
    }
    let r = range as i64;
    let dim = volume.dim();
    for site in volume.sites() {
        let lo: Vec<i64> = site.coords().iter().map(|c| c - r).collect();
        let hi: Vec<i64> = site.coords().iter().map(|c| c + r).collect();
        debug_assert_eq!(lo.len(), dim);
        for s in box_sites(&lo, &hi) {
            if !volume.contains(&s) {
                out.insert(s);
            }
        }
    }
    out
}

pub fn translate<'a>(sites: impl IntoIterator<Item = &'a Site>, shift: &Site) -> BTreeSet<Site> {
    sites.into_iter().map(|s| s.offset(shift)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[&[i64]]) -> BTreeSet<Site> {
        xs.iter().map(|c| Site::new(c.to_vec())).collect()
    }

    #[test]
    fn hypercube_enumeration() {
        let v = Volume::hypercube(1, 1, 12).unwrap();
        assert_eq!(v.sites(), &[Site::from(-1), Site::from(0), Site::from(1)]);
        let v = Volume::hypercube(0, 3, 12).unwrap();
        assert_eq!(v.sites(), &[Site::new(vec![0, 0, 0])]);
        let v = Volume::hypercube(1, 2, 12).unwrap();
        assert_eq!(v.len(), 9);
        assert_eq!(v.sites()[0], Site::new(vec![-1, -1]));
        assert_eq!(v.sites()[1], Site::new(vec![-1, 0]));
        assert_eq!(v.position(&Site::new(vec![0, 0])), Some(4));
    }

    #[test]
    fn hypercube_cap_is_reported() {
        let err = Volume::hypercube(2, 2, 12).unwrap_err();
        match err {
            Error::SizeLimit { sites, cap } => {
                assert_eq!(sites, 25);
                assert_eq!(cap, 12);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(Volume::hypercube(1, 0, 12).is_err());
        assert!(Volume::chain(13, 12).is_err());
    }

    #[test]
    fn diameters() {
        assert_eq!(linf_diameter(&set(&[&[0, 0], &[1, 2]])).unwrap(), 2);
        assert_eq!(linf_diameter(&set(&[&[3, 3]])).unwrap(), 0);
        assert_eq!(linf_diameter(&set(&[&[0], &[5]])).unwrap(), 5);
        assert!(linf_diameter(&BTreeSet::new()).is_err());
    }

    #[test]
    fn connected_spans() {
        assert_eq!(connected_span_size(&set(&[&[0]])).unwrap(), 1);
        assert_eq!(connected_span_size(&set(&[&[0], &[2]])).unwrap(), 3);
        assert_eq!(connected_span_size(&set(&[&[0, 0], &[1, 1]])).unwrap(), 3);
        assert_eq!(connected_span_size(&set(&[&[0, 0], &[2, 2]])).unwrap(), 5);
        assert!(connected_span_size(&BTreeSet::new()).is_err());
        let far = set(&[&[0], &[100]]);
        assert!(matches!(connected_span_size(&far), Err(Error::Capability(_))));
    }

    #[test]
    fn envelopes() {
        let v = Volume::hypercube(1, 1, 12).unwrap();
        let sites = |xs: &[i64]| xs.iter().map(|&x| Site::from(x)).collect::<BTreeSet<_>>();
        assert_eq!(boundary_envelope(&v, 1), sites(&[-2, 2]));
        assert_eq!(boundary_envelope(&v, 2), sites(&[-3, -2, 2, 3]));
        assert!(boundary_envelope(&v, 0).is_empty());
        let sq = Volume::hypercube(0, 2, 12).unwrap();
        assert_eq!(boundary_envelope(&sq, 1).len(), 8);
    }

    #[test]
    fn translation() {
        let x = set(&[&[0], &[1]]);
        assert_eq!(translate(&x, &Site::from(3)), set(&[&[3], &[4]]));
        assert_eq!(translate(&x, &Site::from(0)), x);
        let back = translate(&translate(&x, &Site::from(7)), &Site::from(-7));
        assert_eq!(back, x);
    }

    #[test]
    fn combinations_cover_all() {
        let mut idx = vec![0, 1];
        let mut count = 1;
        while next_combination(&mut idx, 5) {
            count += 1;
        }
        assert_eq!(count, 10);
    }
}
