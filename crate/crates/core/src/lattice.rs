//! Geometry of ℤ^d boxes and discrete tori.
//!
//! The torus 𝕋^d_M is the hypercube [0, M)^d with opposite faces identified;
//! all distances are ℓ∞ (max-norm) with per-axis wraparound. Boxes Λ_R(y) are
//! the balls {x : d(x,y) ≤ R} (side 2R+1 sites). Suitable ℓ-covers place
//! anchors on the grid (3ℓ/2·ℤ)^d mod M, which requires M ≡ ℓ (mod 3ℓ/2);
//! the builder shrinks ℓ to the nearest admissible value when the congruence
//! fails and records the adjustment.

use crate::{LabError, Result};
use serde::{Deserialize, Serialize};

/// d-dimensional discrete torus with M sites per axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusGeometry {
    pub d: usize,
    pub m: usize,
}

impl TorusGeometry {
    pub fn new(d: usize, m: usize) -> Result<Self> {
        if d == 0 || m == 0 {
            return Err(LabError::Config("torus needs d ≥ 1 and M ≥ 1".into()));
        }
        Ok(TorusGeometry { d, m })
    }

    pub fn site_count(&self) -> usize {
        self.m.pow(self.d as u32)
    }

    /// Lexicographic site index from coordinates in [0, M)^d.
    pub fn index_of(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.d);
        let mut idx = 0;
        for &c in coords {
            debug_assert!(c < self.m);
            idx = idx * self.m + c;
        }
        idx
    }

    pub fn coords_of(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.d];
        for i in (0..self.d).rev() {
            out[i] = index % self.m;
            index /= self.m;
        }
        out
    }

    fn check_site(&self, x: usize) -> Result<()> {
        if x >= self.site_count() {
            return Err(LabError::Domain(format!(
                "site {x} outside torus with {} sites",
                self.site_count()
            )));
        }
        Ok(())
    }

    /// Per-axis wrapped distance min(|Δ|, M − |Δ|).
    fn axis_distance(&self, a: usize, b: usize) -> usize {
        let delta = a.abs_diff(b);
        delta.min(self.m - delta)
    }

    /// ℓ∞ torus distance.
    pub fn distance(&self, x: usize, y: usize) -> usize {
        let cx = self.coords_of(x);
        let cy = self.coords_of(y);
        cx.iter()
            .zip(&cy)
            .map(|(&a, &b)| self.axis_distance(a, b))
            .max()
            .unwrap()
    }

    /// Checked variant of `distance`.
    pub fn torus_distance(&self, x: usize, y: usize) -> Result<usize> {
        self.check_site(x)?;
        self.check_site(y)?;
        Ok(self.distance(x, y))
    }

    /// All sites of the box Λ_R(center) = {x : d(x, center) ≤ R}.
    pub fn box_sites(&self, center: usize, radius: usize) -> Vec<usize> {
        let c = self.coords_of(center);
        let width = (2 * radius + 1).min(self.m);
        let mut sites = Vec::with_capacity(width.pow(self.d as u32));
        let mut offsets = vec![0usize; self.d];
        loop {
            let coords: Vec<usize> = c
                .iter()
                .zip(&offsets)
                .map(|(&ci, &o)| {
                    // offsets run 0..width, shifted to [−radius, radius]
                    let shift = o as i64 - radius.min(self.m / 2) as i64;
                    (ci as i64 + shift).rem_euclid(self.m as i64) as usize
                })
                .collect();
            sites.push(self.index_of(&coords));
            let mut pos = 0;
            loop {
                offsets[pos] += 1;
                if offsets[pos] < width {
                    break;
                }
                offsets[pos] = 0;
                pos += 1;
                if pos == self.d {
                    sites.sort_unstable();
                    sites.dedup();
                    return sites;
                }
            }
        }
    }
}

/// A set of torus sites with O(1) membership and stable iteration order.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub geom: TorusGeometry,
    /// Sorted, deduplicated site indices.
    pub sites: Vec<usize>,
    bitmap: Vec<bool>,
    pub is_box: bool,
    pub anchor: Option<usize>,
    pub radius: Option<usize>,
}

impl Region {
    pub fn from_sites(geom: TorusGeometry, mut sites: Vec<usize>) -> Result<Self> {
        sites.sort_unstable();
        sites.dedup();
        let n = geom.site_count();
        let mut bitmap = vec![false; n];
        for &s in &sites {
            if s >= n {
                return Err(LabError::Domain(format!("site {s} not in torus")));
            }
            bitmap[s] = true;
        }
        Ok(Region {
            geom,
            sites,
            bitmap,
            is_box: false,
            anchor: None,
            radius: None,
        })
    }

    pub fn full(geom: TorusGeometry) -> Self {
        let sites: Vec<usize> = (0..geom.site_count()).collect();
        let bitmap = vec![true; geom.site_count()];
        Region {
            geom,
            sites,
            bitmap,
            is_box: false,
            anchor: None,
            radius: None,
        }
    }

    pub fn box_at(geom: TorusGeometry, center: usize, radius: usize) -> Result<Self> {
        geom.check_site(center)?;
        let mut r = Region::from_sites(geom, geom.box_sites(center, radius))?;
        r.is_box = true;
        r.anchor = Some(center);
        r.radius = Some(radius);
        Ok(r)
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        site < self.bitmap.len() && self.bitmap[site]
    }

    /// Position of `site` in the sorted site list.
    pub fn local_index(&self, site: usize) -> Option<usize> {
        if !self.contains(site) {
            return None;
        }
        self.sites.binary_search(&site).ok()
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut sites = self.sites.clone();
        sites.extend_from_slice(&other.sites);
        Region::from_sites(self.geom, sites).expect("union of valid regions")
    }

    pub fn intersects(&self, other: &Region) -> bool {
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.sites.iter().any(|&s| big.contains(s))
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.geom.site_count()
    }

    /// Distance from a site to this region (0 when inside).
    pub fn distance_to(&self, x: usize) -> usize {
        if self.contains(x) {
            return 0;
        }
        self.sites
            .iter()
            .map(|&s| self.geom.distance(x, s))
            .min()
            .expect("distance to empty region")
    }

    /// Distance between two regions (min over pairs).
    pub fn distance_to_region(&self, other: &Region) -> usize {
        self.sites.iter().map(|&s| other.distance_to(s)).min().unwrap()
    }

    /// dist(x, Θ^c): how deep x sits inside the region (∞-like cap when the
    /// region is the full torus, returned as M).
    pub fn depth(&self, x: usize) -> usize {
        if !self.contains(x) {
            return 0;
        }
        if self.is_full() {
            return self.geom.m;
        }
        (0..self.geom.site_count())
            .filter(|&y| !self.contains(y))
            .map(|y| self.geom.distance(x, y))
            .min()
            .unwrap()
    }

    /// ℓ-extended boundary ∂_ℓΘ = {x ∈ Θ : dist(x, Θ^c) ≤ ℓ}.
    pub fn ext_boundary(&self, ell: usize) -> Region {
        let sites: Vec<usize> = self
            .sites
            .iter()
            .copied()
            .filter(|&x| self.depth(x) <= ell)
            .collect();
        Region::from_sites(self.geom, sites).unwrap()
    }

    /// ℓ-interior Θ_ℓ = Θ ∖ ∂_ℓΘ.
    pub fn interior(&self, ell: usize) -> Region {
        let sites: Vec<usize> = self
            .sites
            .iter()
            .copied()
            .filter(|&x| self.depth(x) > ell)
            .collect();
        Region::from_sites(self.geom, sites).unwrap()
    }

    /// Interior boundary ∂₁Θ: sites of Θ at distance exactly 1 from Θ^c.
    pub fn inner_boundary(&self) -> Region {
        self.ext_boundary(1)
    }

    /// max-norm diameter of the region as a site set.
    pub fn diameter(&self) -> usize {
        let mut best = 0;
        for (i, &a) in self.sites.iter().enumerate() {
            for &b in &self.sites[i + 1..] {
                best = best.max(self.geom.distance(a, b));
            }
        }
        best
    }

    /// Characteristic 0/1 mask over the full torus sites.
    pub fn mask(&self) -> &[bool] {
        &self.bitmap
    }

    /// Serializable description for experiment provenance.
    pub fn describe(&self) -> RegionDescription {
        RegionDescription {
            d: self.geom.d,
            m: self.geom.m,
            anchor: self.anchor,
            radius: self.radius,
            sites: self.sites.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegionDescription {
    pub d: usize,
    pub m: usize,
    pub anchor: Option<usize>,
    pub radius: Option<usize>,
    pub sites: Vec<usize>,
}

/// Region-aware distance |x−y|_Θ = min(|x−y|, dist(x,∂₁Θ) + dist(y,∂₁Θ)):
/// the interior boundary is treated as a single point so decay statements
/// ignore edge modes. An empty boundary (full torus) reduces to |x−y|.
pub fn region_distance(x: usize, y: usize, theta: &Region) -> Result<f64> {
    if !theta.contains(x) || !theta.contains(y) {
        return Err(LabError::Domain(format!(
            "region_distance: sites {x},{y} must lie in the region"
        )));
    }
    let plain = theta.geom.distance(x, y) as f64;
    let boundary = theta.inner_boundary();
    if boundary.is_empty() {
        return Ok(plain);
    }
    let via = (boundary.distance_to(x) + boundary.distance_to(y)) as f64;
    Ok(plain.min(via))
}

/// Suitable ℓ-cover of the torus: boxes Λ_ℓ(a) with anchors on (3ℓ/2·ℤ)^d.
///
/// Two adjacency notions coexist: the *anchor graph* joins anchors that are
/// one grid step apart along a single axis (degree exactly 2d, including the
/// shorter seam step the congruence M ≡ ℓ (mod 3ℓ/2) produces), while
/// *overlap adjacency* joins boxes sharing sites (this includes diagonal
/// neighbors and drives cluster connectivity).
#[derive(Clone, Debug)]
pub struct CoverIndex {
    pub geom: TorusGeometry,
    /// Effective (possibly auto-adjusted) scale.
    pub ell: usize,
    pub requested_ell: usize,
    /// Anchor site indices, lexicographic in anchor coordinates.
    pub anchors: Vec<usize>,
    pub boxes: Vec<Region>,
    /// anchor_graph[i] = anchors one grid step away along one axis.
    pub anchor_graph: Vec<Vec<usize>>,
    /// overlap_adjacency[i] = boxes sharing at least one site with box i.
    pub overlap_adjacency: Vec<Vec<usize>>,
}

fn admissible(m: usize, ell: usize) -> bool {
    ell >= 2 && ell % 2 == 0 && m % (3 * ell / 2) == ell
}

impl CoverIndex {
    /// Build a suitable ℓ-cover; shrinks ℓ to the nearest admissible value
    /// below when M mod (3ℓ/2) ≠ ℓ.
    pub fn build(geom: TorusGeometry, ell: usize, range_r: usize) -> Result<CoverIndex> {
        let m = geom.m;
        if ell >= m {
            return Err(LabError::Config(format!("cover scale ℓ={ell} ≥ M={m}")));
        }
        if ell <= range_r {
            return Err(LabError::Config(format!(
                "cover scale ℓ={ell} must exceed the interaction range r={range_r}"
            )));
        }
        let mut eff = ell - ell % 2;
        while eff > range_r && !admissible(m, eff) {
            eff -= 2;
        }
        if eff <= range_r || !admissible(m, eff) {
            return Err(LabError::Config(format!(
                "no admissible even scale ≤ {ell} with M ≡ ℓ (mod 3ℓ/2) for M={m}, r={range_r}"
            )));
        }
        let spacing = 3 * eff / 2;
        let per_axis: Vec<usize> = (0..)
            .map(|i| i * spacing)
            .take_while(|&a| a < m)
            .collect();
        let k = per_axis.len();
        // anchors = lexicographic product of per-axis positions; keep the
        // per-anchor position tuples for the grid-step graph
        let mut anchors = Vec::new();
        let mut tuples = Vec::new();
        let mut idx = vec![0usize; geom.d];
        'outer: loop {
            let coords: Vec<usize> = idx.iter().map(|&i| per_axis[i]).collect();
            anchors.push(geom.index_of(&coords));
            tuples.push(idx.clone());
            let mut pos = 0;
            loop {
                idx[pos] += 1;
                if idx[pos] < k {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
                if pos == geom.d {
                    break 'outer;
                }
            }
        }
        // sort anchors (with their tuples) by site index for stable order
        let mut order: Vec<usize> = (0..anchors.len()).collect();
        order.sort_by_key(|&i| anchors[i]);
        let anchors: Vec<usize> = order.iter().map(|&i| anchors[i]).collect();
        let tuples: Vec<Vec<usize>> = order.iter().map(|&i| tuples[i].clone()).collect();
        let boxes: Vec<Region> = anchors
            .iter()
            .map(|&a| Region::box_at(geom, a, eff).unwrap())
            .collect();
        let nb = boxes.len();
        let tuple_pos: std::collections::HashMap<Vec<usize>, usize> = tuples
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, t)| (t, i))
            .collect();
        let mut anchor_graph = vec![Vec::new(); nb];
        for (i, t) in tuples.iter().enumerate() {
            for axis in 0..geom.d {
                for dir in [1, k - 1] {
                    let mut nbr = t.clone();
                    nbr[axis] = (nbr[axis] + dir) % k;
                    if nbr != *t {
                        let j = tuple_pos[&nbr];
                        if !anchor_graph[i].contains(&j) {
                            anchor_graph[i].push(j);
                        }
                    }
                }
            }
            anchor_graph[i].sort_unstable();
        }
        let mut overlap_adjacency = vec![Vec::new(); nb];
        for i in 0..nb {
            for j in 0..nb {
                if i != j && boxes[i].intersects(&boxes[j]) {
                    overlap_adjacency[i].push(j);
                }
            }
        }
        Ok(CoverIndex {
            geom,
            ell: eff,
            requested_ell: ell,
            anchors,
            boxes,
            anchor_graph,
            overlap_adjacency,
        })
    }

    pub fn n_boxes(&self) -> usize {
        self.boxes.len()
    }

    /// Check the suitable-cover properties; returns an explanation on failure.
    pub fn validate(&self, range_r: usize) -> std::result::Result<(), String> {
        let geom = self.geom;
        // (i) coverage
        let mut covered = vec![false; geom.site_count()];
        for b in &self.boxes {
            for &s in &b.sites {
                covered[s] = true;
            }
        }
        if covered.iter().any(|&c| !c) {
            return Err("cover misses sites".into());
        }
        // overlap bound 2d under the anchor graph
        for (i, adj) in self.anchor_graph.iter().enumerate() {
            if adj.len() > 2 * geom.d {
                return Err(format!(
                    "anchor {i} has graph degree {} > 2d",
                    adj.len()
                ));
            }
        }
        // (iii) Λ_{ℓ/4}(a) ∩ Λ_ℓ(a') = ∅ for anchors at the regular grid
        // spacing; the congruence M ≡ ℓ (mod 3ℓ/2) forces one shorter seam
        // step per axis where the quarter box legitimately meets the
        // neighboring full box, so seam pairs are exempt.
        for (i, &a) in self.anchors.iter().enumerate() {
            let quarter = Region::box_at(geom, a, self.ell / 4).unwrap();
            for (j, other) in self.boxes.iter().enumerate() {
                if i == j {
                    continue;
                }
                let seam = geom.distance(a, self.anchors[j]) < 3 * self.ell / 2;
                if !seam && quarter.intersects(other) {
                    return Err(format!("Λ_ℓ/4({i}) meets Λ_ℓ({j})"));
                }
            }
        }
        // (ii) every site has an anchor with Λ_{ℓ/4}(y) ⊂ Λ_ℓ(a)
        for y in 0..geom.site_count() {
            let quarter = geom.box_sites(y, self.ell / 4);
            let ok = self
                .boxes
                .iter()
                .any(|b| quarter.iter().all(|&s| b.contains(s)));
            if !ok {
                return Err(format!("site {y} has no enclosing box for Λ_ℓ/4"));
            }
        }
        // anchor count bounds: spacing 3ℓ/2 puts the per-axis count between
        // M/2ℓ and 2M/ℓ
        let lo = (geom.m as f64 / (2.0 * self.ell as f64)).powi(geom.d as i32);
        let hi = (2.0 * geom.m as f64 / self.ell as f64).powi(geom.d as i32);
        let n = self.anchors.len() as f64;
        if n < lo || n > hi {
            return Err(format!("|Ξ_ℓ|={n} outside [{lo},{hi}]"));
        }
        // non-overlapping boxes separated by more than r
        for i in 0..self.n_boxes() {
            for j in (i + 1)..self.n_boxes() {
                if !self.overlap_adjacency[i].contains(&j) {
                    let d = self.boxes[i].distance_to_region(&self.boxes[j]);
                    if d <= range_r {
                        return Err(format!(
                            "non-overlapping boxes {i},{j} at distance {d} ≤ r"
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn describe(&self) -> CoverDescription {
        CoverDescription {
            d: self.geom.d,
            m: self.geom.m,
            ell: self.ell,
            requested_ell: self.requested_ell,
            anchors: self.anchors.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverDescription {
    pub d: usize,
    pub m: usize,
    pub ell: usize,
    pub requested_ell: usize,
    pub anchors: Vec<usize>,
}

/// Scaled distance profile ρ^ℓ_A(x) = dist(A, {x})/√ℓ and the weights
/// e^{±c·ρ} used by quasi-locality norms. Weight is 1 on A itself.
#[derive(Clone, Debug)]
pub struct DistanceWeights {
    pub rho: Vec<f64>,
    pub c: f64,
}

impl DistanceWeights {
    pub fn new(a: &Region, c: f64, ell: usize) -> Result<DistanceWeights> {
        if a.is_empty() {
            return Err(LabError::Domain("weights need a nonempty base set".into()));
        }
        let sqrt_ell = (ell as f64).sqrt();
        let rho = (0..a.geom.site_count())
            .map(|x| a.distance_to(x) as f64 / sqrt_ell)
            .collect();
        Ok(DistanceWeights { rho, c })
    }

    /// Restriction of ρ to a sub-region (ordered like the region's sites).
    pub fn rho_on(&self, region: &Region) -> Vec<f64> {
        region.sites.iter().map(|&s| self.rho[s]).collect()
    }

    pub fn weight_pos(&self, x: usize) -> f64 {
        (self.c * self.rho[x]).exp()
    }

    pub fn weight_neg(&self, x: usize) -> f64 {
        (-self.c * self.rho[x]).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn wraparound_distance() {
        let g = TorusGeometry::new(1, 10).unwrap();
        assert_eq!(g.torus_distance(1, 9).unwrap(), 2);
        assert_eq!(g.torus_distance(4, 4).unwrap(), 0);
    }

    #[test]
    fn distance_2d_brute_force() {
        // oracle: min over all wrap choices per axis
        let g = TorusGeometry::new(2, 8).unwrap();
        let x = g.index_of(&[0, 0]);
        let y = g.index_of(&[3, 6]);
        let oracle = |a: &[usize], b: &[usize]| -> usize {
            a.iter()
                .zip(b)
                .map(|(&ai, &bi)| {
                    [-1i64, 0, 1]
                        .iter()
                        .map(|&k| ((ai as i64 - bi as i64) + k * 8).unsigned_abs() as usize)
                        .min()
                        .unwrap()
                })
                .max()
                .unwrap()
        };
        assert_eq!(g.distance(x, y), 3);
        assert_eq!(g.distance(x, y), oracle(&[0, 0], &[3, 6]));
    }

    #[test]
    fn invalid_site_rejected() {
        let g = TorusGeometry::new(1, 10).unwrap();
        assert!(g.torus_distance(0, 10).is_err());
    }

    #[test]
    fn index_roundtrip() {
        let g = TorusGeometry::new(3, 5).unwrap();
        for idx in 0..g.site_count() {
            assert_eq!(g.index_of(&g.coords_of(idx)), idx);
        }
    }

    #[test]
    fn region_distance_cases() {
        let g = TorusGeometry::new(1, 20).unwrap();
        // full torus: boundary empty, plain distance
        let full = Region::full(g);
        assert_eq!(region_distance(2, 7, &full).unwrap(), 5.0);
        // interval [0,9]: ∂₁ = {0,9}
        let theta = Region::from_sites(g, (0..10).collect()).unwrap();
        let b = theta.inner_boundary();
        assert_eq!(b.sites, vec![0, 9]);
        assert_eq!(region_distance(2, 7, &theta).unwrap(), 4.0);
        // boundary points identified
        assert_eq!(region_distance(0, 9, &theta).unwrap(), 0.0);
        // outside region rejected
        assert!(region_distance(2, 15, &theta).is_err());
    }

    #[test]
    fn interior_boundary_partition() {
        let g = TorusGeometry::new(2, 12).unwrap();
        let theta = Region::box_at(g, 0, 3).unwrap();
        for ell in 0..4 {
            let int = theta.interior(ell);
            let bdy = theta.ext_boundary(ell);
            assert_eq!(int.len() + bdy.len(), theta.len());
            assert!(!int.intersects(&bdy) || int.is_empty() || bdy.is_empty());
            let re = int.union(&bdy);
            assert_eq!(re.sites, theta.sites);
        }
    }

    #[test]
    fn suitable_cover_m16_ell4() {
        let g = TorusGeometry::new(1, 16).unwrap();
        let cover = CoverIndex::build(g, 4, 1).unwrap();
        assert_eq!(cover.ell, 4);
        assert_eq!(cover.anchors, vec![0, 6, 12]);
        cover.validate(1).unwrap();
        // exhaustive membership
        let mut covered = vec![false; 16];
        for b in &cover.boxes {
            for &s in &b.sites {
                covered[s] = true;
            }
        }
        assert!(covered.iter().all(|&c| c));
    }

    #[test]
    fn cover_auto_adjusts_ell() {
        // M=16, ℓ=6: 3ℓ/2=9, 16 mod 9 = 7 ≠ 6 → shrink to 4
        let g = TorusGeometry::new(1, 16).unwrap();
        let cover = CoverIndex::build(g, 6, 1).unwrap();
        assert_eq!(cover.requested_ell, 6);
        assert_eq!(cover.ell, 4);
        cover.validate(1).unwrap();
    }

    #[test]
    fn cover_2d_validates() {
        // M=22, ℓ=4: 3ℓ/2=6: 22 mod 6 = 4 ✓
        let g = TorusGeometry::new(2, 22).unwrap();
        let cover = CoverIndex::build(g, 4, 1).unwrap();
        assert_eq!(cover.ell, 4);
        cover.validate(1).unwrap();
        assert_eq!(cover.anchors.len(), 16); // 4 per axis
        for adj in &cover.anchor_graph {
            assert_eq!(adj.len(), 4); // degree exactly 2d on the grid graph
        }
        // overlap adjacency includes diagonal neighbors
        assert!(cover.overlap_adjacency.iter().all(|a| a.len() >= 4));
    }

    #[test]
    fn cover_rejects_bad_scales() {
        let g = TorusGeometry::new(1, 16).unwrap();
        assert!(CoverIndex::build(g, 16, 1).is_err());
        assert!(CoverIndex::build(g, 4, 4).is_err());
    }

    #[test]
    fn weights_basic() {
        let g = TorusGeometry::new(1, 20).unwrap();
        let a = Region::from_sites(g, vec![0]).unwrap();
        let w = DistanceWeights::new(&a, 1.0, 4).unwrap();
        assert_eq!(w.weight_pos(0), 1.0);
        assert!((w.weight_pos(6) - 3.0f64.exp()).abs() < 1e-12);
        let w0 = DistanceWeights::new(&a, 0.0, 4).unwrap();
        assert!((0..20).all(|x| w0.weight_pos(x) == 1.0));
        assert!(DistanceWeights::new(&Region::from_sites(g, vec![]).unwrap(), 1.0, 4).is_err());
    }

    proptest! {
        #[test]
        fn distance_is_metric(m in 3usize..20, x in 0usize..8000, y in 0usize..8000, z in 0usize..8000) {
            let g = TorusGeometry::new(2, m).unwrap();
            let n = g.site_count();
            let (x, y, z) = (x % n, y % n, z % n);
            let dxy = g.distance(x, y);
            let dyx = g.distance(y, x);
            prop_assert_eq!(dxy, dyx);
            prop_assert_eq!(dxy == 0, x == y);
            prop_assert!(g.distance(x, z) <= dxy + g.distance(y, z));
            prop_assert!(dxy <= g.m / 2);
        }

        #[test]
        fn region_distance_dominated(m in 8usize..24, lo in 0usize..6, len in 4usize..12, x in 0usize..100, y in 0usize..100) {
            let g = TorusGeometry::new(1, m).unwrap();
            let hi = (lo + len).min(m);
            let sites: Vec<usize> = (lo..hi).collect();
            prop_assume!(sites.len() >= 2);
            let theta = Region::from_sites(g, sites.clone()).unwrap();
            let x = sites[x % sites.len()];
            let y = sites[y % sites.len()];
            let rd = region_distance(x, y, &theta).unwrap();
            prop_assert!(rd <= g.distance(x, y) as f64);
        }
    }
}
