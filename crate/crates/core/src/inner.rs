//! Inner covers: unions of small disks around certified repelling periodic
//! points.

use alloc::vec::Vec;

use crate::cellset::CellSet;
use crate::dyadic::{Dyadic, DyadicComplex};
use crate::error::Result;
use crate::outer::escape_radius;
use crate::periodic::{OrbitCertificate, PeriodicCensus};
use crate::poly::PolynomialOracle;

/// Radius budget at precision index `m`.
///
/// A point within `neighborhood(m)` of the Julia set lies within
/// `neighborhood(m) + density(m) + isolation(m) = disk(m)` of a certified
/// center once enough periods are known.
pub mod budget {
    use crate::dyadic::Dyadic;

    fn pow2(e: i64) -> Dyadic {
        Dyadic::pow2(e).expect("small exponent")
    }

    /// Target neighborhood of the Julia set to be covered.
    pub fn neighborhood(m: u32) -> Dyadic {
        pow2(-(m as i64 + 2))
    }

    /// Density of the known periodic points in the Julia set.
    pub fn density(m: u32) -> Dyadic {
        pow2(-(m as i64 + 3))
    }

    /// Distance from a certified center to its true periodic point.
    pub fn isolation(m: u32) -> Dyadic {
        pow2(-(m as i64 + 3))
    }

    /// Radius of each disk in the cover.
    pub fn disk(m: u32) -> Dyadic {
        pow2(-(m as i64 + 1))
    }

    /// Grid depth of the cover.
    pub fn depth(m: u32) -> u32 {
        m + 4
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerCover {
    pub m: u32,
    pub certificates: Vec<OrbitCertificate>,
    pub cover: CellSet,
}

impl InnerCover {
    pub fn is_empty(&self) -> bool {
        self.certificates.is_empty()
    }
}

/// A census suitable for [`inner_cover_from`] at precision index `m`.
pub fn census_for(p: &PolynomialOracle, m: u32) -> Result<PeriodicCensus> {
    let er = escape_radius(p)?;
    PeriodicCensus::new(p, &budget::isolation(m), &er.frame())
}

/// Disks of radius `2^-(m+1)` around every repelling certificate of the
/// census whose radius is at most `2^-(m+3)`, gridded at depth `m + 4`.
pub fn inner_cover_from(census: &PeriodicCensus, m: u32) -> Result<InnerCover> {
    let iso = budget::isolation(m);
    let radius = budget::disk(m);
    let certificates: Vec<OrbitCertificate> =
        census.repelling.iter().filter(|c| c.radius <= iso).cloned().collect();
    let disks: Vec<(DyadicComplex, Dyadic)> =
        certificates.iter().map(|c| (c.center.clone(), radius.clone())).collect();
    let frame = escape_radius(census.poly())?.frame();
    let cells = CellSet::from_disks(&disks, budget::depth(m))?;
    let frame = match cells.bounding_box() {
        Some(bb) => frame.hull(&bb),
        None => frame,
    };
    Ok(InnerCover {
        m,
        certificates,
        cover: cells.with_frame(frame)?,
    })
}

/// The inner cover from repelling points of periods `1..=max_period`.
pub fn inner_cover(p: &PolynomialOracle, m: u32, max_period: u32) -> Result<InnerCover> {
    if m == 0 || max_period == 0 {
        return Err(crate::error::Error::Precondition("m and max_period must be at least 1".into()));
    }
    let mut census = census_for(p, m)?;
    census.extend_to(max_period)?;
    inner_cover_from(&census, m)
}
