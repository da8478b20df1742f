//! Named topological relations over the DE-9IM matrix, their reverses, and
//! the bounding-box pre-filter for containment-like relations.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::geom::{self, De9imMatrix, Geometry, KernelError, Mbb};

/// The supported topological relations. Masks follow the OGC
/// Simple-Features DE-9IM patterns; `crosses` and `overlaps` condition on
/// the inherent dimensions of the operands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Equals,
    Intersects,
    Touches,
    Crosses,
    Overlaps,
    Within,
    Covers,
    Contains,
    CoveredBy,
    Disjoint,
}

/// The seven relations evaluated throughout the experiments.
pub const CORE_RELATIONS: [Relation; 7] = [
    Relation::Equals,
    Relation::Intersects,
    Relation::Touches,
    Relation::Crosses,
    Relation::Overlaps,
    Relation::Within,
    Relation::Covers,
];

pub const ALL_RELATIONS: [Relation; 10] = [
    Relation::Equals,
    Relation::Intersects,
    Relation::Touches,
    Relation::Crosses,
    Relation::Overlaps,
    Relation::Within,
    Relation::Covers,
    Relation::Contains,
    Relation::CoveredBy,
    Relation::Disjoint,
];

impl Relation {
    /// The reverse relation r' with r'(y, x) ⇔ r(x, y).
    pub fn reverse(self) -> Relation {
        match self {
            Relation::Within => Relation::Contains,
            Relation::Contains => Relation::Within,
            Relation::Covers => Relation::CoveredBy,
            Relation::CoveredBy => Relation::Covers,
            // equals, intersects, touches, crosses, overlaps and disjoint
            // are symmetric.
            symmetric => symmetric,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Relation::Equals => "equals",
            Relation::Intersects => "intersects",
            Relation::Touches => "touches",
            Relation::Crosses => "crosses",
            Relation::Overlaps => "overlaps",
            Relation::Within => "within",
            Relation::Covers => "covers",
            Relation::Contains => "contains",
            Relation::CoveredBy => "coveredBy",
            Relation::Disjoint => "disjoint",
        }
    }

    /// Decide the relation from a computed matrix and the operands'
    /// inherent dimensions.
    pub fn matches(self, m: &De9imMatrix, dim1: i8, dim2: i8) -> bool {
        let mask = |s: &str| m.matches(s).expect("static masks are well-formed");
        match self {
            Relation::Equals => mask("T*F**FFF*"),
            Relation::Disjoint => mask("FF*FF****"),
            Relation::Intersects => !mask("FF*FF****"),
            Relation::Touches => mask("FT*******") || mask("F**T*****") || mask("F***T****"),
            Relation::Crosses => {
                if dim1 < dim2 {
                    mask("T*T******")
                } else if dim1 > dim2 {
                    mask("T*****T**")
                } else if dim1 == 1 {
                    mask("0********")
                } else {
                    false
                }
            }
            Relation::Overlaps => {
                if dim1 != dim2 {
                    false
                } else if dim1 == 1 {
                    mask("1*T***T**")
                } else {
                    mask("T*T***T**")
                }
            }
            Relation::Within => mask("T*F**F***"),
            Relation::Contains => mask("T*****FF*"),
            Relation::Covers => {
                mask("T*****FF*") || mask("*T****FF*") || mask("***T**FF*") || mask("****T*FF*")
            }
            Relation::CoveredBy => {
                mask("T*F**F***") || mask("*TF**F***") || mask("**FT*F***") || mask("**F*TF***")
            }
        }
    }

    /// Full evaluation: compute the DE-9IM matrix and match it.
    pub fn evaluate(self, g1: &Geometry, g2: &Geometry) -> Result<bool, KernelError> {
        let m = geom::de9im(g1, g2)?;
        Ok(self.matches(&m, g1.dimension(), g2.dimension()))
    }
}

impl FromStr for Relation {
    type Err = UnsupportedRelation;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "equals" => Ok(Relation::Equals),
            "intersects" => Ok(Relation::Intersects),
            "touches" => Ok(Relation::Touches),
            "crosses" => Ok(Relation::Crosses),
            "overlaps" => Ok(Relation::Overlaps),
            "within" => Ok(Relation::Within),
            "covers" => Ok(Relation::Covers),
            "contains" => Ok(Relation::Contains),
            "coveredby" => Ok(Relation::CoveredBy),
            "disjoint" => Ok(Relation::Disjoint),
            _ => Err(UnsupportedRelation(s.to_string())),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, PartialEq)]
#[error("unsupported relation: {0:?}")]
pub struct UnsupportedRelation(pub String);

/// Outcome of the bounding-box pre-filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterVerdict {
    pub proceed: bool,
}

/// Necessary-condition test on bounding boxes. `proceed == false` only when
/// the relation is provably impossible from the boxes alone: equality needs
/// coinciding boxes, covering needs the source box to contain the target
/// box, being covered needs the opposite. Every other relation passes.
pub fn test_mbb(r: Relation, mbb_s: &Mbb, mbb_t: &Mbb) -> FilterVerdict {
    let proceed = match r {
        Relation::Equals => mbb_s.coincides(mbb_t),
        Relation::Covers | Relation::Contains => mbb_s.contains(mbb_t),
        Relation::Within | Relation::CoveredBy => mbb_t.contains(mbb_s),
        _ => true,
    };
    FilterVerdict { proceed }
}
