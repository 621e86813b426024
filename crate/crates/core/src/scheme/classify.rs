use serde::Serialize;

use super::{Ambient, Forest, RealScheme};

/// A connected component of the complement of the real part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionId {
    /// Region bounded from outside by the oval with this preorder index.
    Oval(usize),
    /// Complement of the ovals' exteriors, containing the pseudo-line.
    PseudoLine,
    /// Outermost region of an even-degree or ellipsoid curve.
    Outer,
    /// Annulus between torus-curve copies `i` and `i + 1`.
    Zone(usize),
}

/// Region census of a scheme.
///
/// `l_plus + l_zero + l_minus` counts the oval regions, plus the outer region
/// on the ellipsoid. Every oval region has `chi <= 1`, with equality exactly
/// for empty ovals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionStats {
    pub total_ovals: usize,
    pub l_plus: usize,
    pub l_zero: usize,
    pub l_minus: usize,
    /// Ovals not contained in any other oval.
    pub exterior_count: usize,
    pub chi_j: Option<i64>,
    pub region_chis: Vec<(RegionId, i64)>,
}

impl RegionStats {
    /// `l_zero + l_minus`, the quantity the region bounds control.
    pub fn non_positive(&self) -> usize {
        self.l_zero + self.l_minus
    }

    fn record(&mut self, id: RegionId, chi: i64) {
        match chi {
            c if c > 0 => self.l_plus += 1,
            0 => self.l_zero += 1,
            _ => self.l_minus += 1,
        }
        self.region_chis.push((id, chi));
    }
}

fn classify_forest(forest: &Forest, offset: usize, stats: &mut RegionStats) -> usize {
    let nodes = forest.preorder();
    for (i, node) in nodes.iter().enumerate() {
        stats.record(RegionId::Oval(offset + i), 1 - node.children().len() as i64);
    }
    nodes.len()
}

/// Euler characteristics of the complement regions and their sign counts.
pub fn classify_regions(scheme: &RealScheme) -> RegionStats {
    let mut stats = RegionStats {
        total_ovals: scheme.oval_count(),
        l_plus: 0,
        l_zero: 0,
        l_minus: 0,
        exterior_count: 0,
        chi_j: None,
        region_chis: Vec::new(),
    };
    match scheme.ambient() {
        Ambient::ProjectivePlaneOdd => {
            let roots = scheme.forest().roots().len();
            classify_forest(scheme.forest(), 0, &mut stats);
            stats.exterior_count = roots;
            let chi_j = 1 - roots as i64;
            stats.chi_j = Some(chi_j);
            stats.region_chis.push((RegionId::PseudoLine, chi_j));
        }
        Ambient::ProjectivePlaneEven => {
            let roots = scheme.forest().roots().len();
            classify_forest(scheme.forest(), 0, &mut stats);
            stats.exterior_count = roots;
            // Non-orientable outer region: reported, not counted.
            stats.region_chis.push((RegionId::Outer, 1 - roots as i64));
        }
        Ambient::Ellipsoid => {
            let roots = scheme.forest().roots().len();
            classify_forest(scheme.forest(), 0, &mut stats);
            stats.exterior_count = roots;
            stats.record(RegionId::Outer, 2 - roots as i64);
        }
        Ambient::Hyperboloid => {
            let mut offset = 0;
            for (i, zone) in scheme.zones().iter().enumerate() {
                offset += classify_forest(zone, offset, &mut stats);
                let roots = zone.roots().len();
                stats.exterior_count += roots;
                stats.region_chis.push((RegionId::Zone(i), -(roots as i64)));
            }
        }
    }
    stats
}
