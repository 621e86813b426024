//! Real schemes: nesting forests of ovals plus the ambient-specific extras
//! (pseudo-line, torus class and annular zones).

mod classify;
mod enumerate;
mod forest;
mod lift;
mod parser;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use classify::{classify_regions, RegionId, RegionStats};
pub use enumerate::{enumerate_forests, enumerate_schemes};
pub use forest::{Forest, OvalNode};
pub use lift::{lift_real_scheme, LiftedScheme};
pub use parser::MAX_OVALS;

/// Surface the curve lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ambient {
    ProjectivePlaneOdd,
    ProjectivePlaneEven,
    Hyperboloid,
    Ellipsoid,
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ambient::ProjectivePlaneOdd => "odd-degree projective plane",
            Ambient::ProjectivePlaneEven => "even-degree projective plane",
            Ambient::Hyperboloid => "hyperboloid",
            Ambient::Ellipsoid => "ellipsoid",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("scheme does not fit the {ambient}: {reason}")]
    AmbientMismatch { ambient: Ambient, reason: String },
    #[error("operation not defined for the {0}")]
    UnsupportedAmbient(Ambient),
}

/// `copies` parallel curves of homology class `(alpha, beta)` on the torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TorusClass {
    pub alpha: i64,
    pub beta: i64,
    pub copies: u64,
}

/// Combinatorial type of the real part of a curve.
///
/// Invariants (enforced by every constructor):
/// * odd projective plane: `pseudo_line`, no torus data;
/// * even projective plane and ellipsoid: no pseudo-line, no torus data;
/// * hyperboloid: torus class with odd coprime `(alpha, beta)`, one zone per
///   copy, empty `forest`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RealScheme {
    ambient: Ambient,
    forest: Forest,
    pseudo_line: bool,
    torus: Option<TorusClass>,
    zones: Vec<Forest>,
}

impl RealScheme {
    /// Odd-degree projective scheme: the pseudo-line plus `forest`.
    pub fn projective_odd(forest: Forest) -> Self {
        RealScheme {
            ambient: Ambient::ProjectivePlaneOdd,
            forest,
            pseudo_line: true,
            torus: None,
            zones: Vec::new(),
        }
    }

    pub fn projective_even(forest: Forest) -> Self {
        RealScheme {
            ambient: Ambient::ProjectivePlaneEven,
            forest,
            pseudo_line: false,
            torus: None,
            zones: Vec::new(),
        }
    }

    pub fn ellipsoid(forest: Forest) -> Self {
        RealScheme {
            ambient: Ambient::Ellipsoid,
            forest,
            pseudo_line: false,
            torus: None,
            zones: Vec::new(),
        }
    }

    pub fn hyperboloid(torus: TorusClass, zones: Vec<Forest>) -> Result<Self, SchemeError> {
        let mismatch = |reason: String| SchemeError::AmbientMismatch {
            ambient: Ambient::Hyperboloid,
            reason,
        };
        let TorusClass {
            alpha,
            beta,
            copies,
        } = torus;
        if alpha % 2 == 0 || beta % 2 == 0 {
            return Err(mismatch(format!("class ({alpha},{beta}) must have both entries odd")));
        }
        if num_integer::gcd(alpha, beta) != 1 {
            return Err(mismatch(format!("class ({alpha},{beta}) is not primitive")));
        }
        // Unoriented curves: (a,b) and (-a,-b) are the same class.
        let (alpha, beta) = if alpha < 0 { (-alpha, -beta) } else { (alpha, beta) };
        if copies == 0 {
            return Err(mismatch("at least one copy of the torus curve is required".into()));
        }
        let zones = if zones.is_empty() {
            vec![Forest::default(); copies as usize]
        } else {
            zones
        };
        if zones.len() as u64 != copies {
            return Err(mismatch(format!(
                "{} zones given for {copies} copies",
                zones.len()
            )));
        }
        Ok(RealScheme {
            ambient: Ambient::Hyperboloid,
            forest: Forest::default(),
            pseudo_line: false,
            torus: Some(TorusClass {
                alpha,
                beta,
                copies,
            }),
            zones: canonical_rotation(zones),
        })
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    /// Ovals outside the torus zones (empty for the hyperboloid).
    pub fn forest(&self) -> &Forest {
        &self.forest
    }

    pub fn pseudo_line(&self) -> bool {
        self.pseudo_line
    }

    pub fn torus(&self) -> Option<TorusClass> {
        self.torus
    }

    pub fn zones(&self) -> &[Forest] {
        &self.zones
    }

    /// Number of ovals, `l`.
    pub fn oval_count(&self) -> usize {
        self.forest.oval_count() + self.zones.iter().map(Forest::oval_count).sum::<usize>()
    }

    /// Number of connected components of the real part.
    pub fn component_count(&self) -> u64 {
        let l = self.oval_count() as u64;
        match self.ambient {
            Ambient::ProjectivePlaneOdd => l + 1,
            Ambient::ProjectivePlaneEven | Ambient::Ellipsoid => l,
            Ambient::Hyperboloid => l + self.torus.map_or(0, |t| t.copies),
        }
    }

    /// Parses `text` for the given ambient.
    pub fn parse(text: &str, ambient: Ambient) -> Result<Self, SchemeError> {
        parse_scheme(text, ambient)
    }
}

/// Zones of parallel annuli are only defined up to cyclic rotation; keep
/// the lexicographically least rotation.
fn canonical_rotation(zones: Vec<Forest>) -> Vec<Forest> {
    let n = zones.len();
    if n <= 1 {
        return zones;
    }
    let best = (0..n)
        .min_by(|&a, &b| {
            let ra = zones[a..].iter().chain(&zones[..a]);
            let rb = zones[b..].iter().chain(&zones[..b]);
            ra.cmp(rb)
        })
        .unwrap_or(0);
    let mut out = zones;
    out.rotate_left(best);
    out
}

/// Parses scheme text (see the crate README for the grammar).
pub fn parse_scheme(text: &str, ambient: Ambient) -> Result<RealScheme, SchemeError> {
    parser::parse(text, ambient)
}

/// Canonical text of a scheme; `parse_scheme(format_scheme(s))` is `s`.
pub fn format_scheme(scheme: &RealScheme) -> String {
    let mut parts = Vec::new();
    if scheme.pseudo_line {
        parts.push("J".to_string());
    }
    if !scheme.forest.is_empty() {
        parts.push(scheme.forest.items_text());
    }
    if let Some(t) = scheme.torus {
        if scheme.zones.iter().all(Forest::is_empty) {
            return format!("<{}({},{}):>", t.copies, t.alpha, t.beta);
        }
        let zones: Vec<String> = scheme.zones.iter().map(Forest::items_text).collect();
        let body = zones.join(" | ");
        let body = body.split_whitespace().collect::<Vec<_>>().join(" ");
        return format!("<{}({},{}): {}>", t.copies, t.alpha, t.beta, body);
    }
    format!("<{}>", parts.join(" + "))
}

impl fmt::Display for RealScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_scheme(self))
    }
}
