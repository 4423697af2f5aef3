//! Mask-to-graph pipeline: threshold, clean up, thin, trace, simplify and
//! read speeds back off the mask channels.

pub mod graph;
pub mod morph;
pub mod simplify;
pub mod skeleton;
pub mod speeds;

pub use graph::{graph_from_skeleton, skeleton_arclength};
pub use morph::{binarize, refine};
pub use simplify::simplify_graph;
pub use skeleton::skeletonize;
pub use speeds::assign_speeds;

use crate::error::{Error, Result};
use crate::network::RoadNetwork;
use crate::raster::SpeedMask;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtractParams {
    /// Fraction of full intensity at which a union-channel pixel counts as road.
    pub binarize_threshold: f64,
    pub closing_radius_px: usize,
    pub min_blob_area_px: usize,
    pub spur_len_m: f64,
    /// Half-width of the window sampled around each vertex for speed votes.
    pub patch_radius_px: usize,
}

impl Default for ExtractParams {
    fn default() -> Self {
        ExtractParams {
            binarize_threshold: 0.3,
            closing_radius_px: 2,
            min_blob_area_px: 50,
            spur_len_m: 12.0,
            patch_radius_px: 2,
        }
    }
}

impl ExtractParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Validation(m));
        if !(self.binarize_threshold > 0.0 && self.binarize_threshold < 1.0) {
            return bad(format!("binarize threshold must be in (0, 1), got {}", self.binarize_threshold));
        }
        if self.closing_radius_px == 0 || self.min_blob_area_px == 0 || self.patch_radius_px == 0 {
            return bad("closing radius, minimum blob area and patch radius must be positive".into());
        }
        if !(self.spur_len_m > 0.0) {
            return bad(format!("spur length must be positive, got {}", self.spur_len_m));
        }
        Ok(())
    }
}

pub fn extract_network(mask: &SpeedMask, params: &ExtractParams) -> Result<RoadNetwork> {
    params.validate()?;
    let binary = binarize(mask, params.binarize_threshold);
    let refined = refine(&binary, params.closing_radius_px, params.min_blob_area_px);
    let skeleton = skeletonize(&refined);
    let graph = graph_from_skeleton(&skeleton, &mask.transform);
    let simplified = simplify_graph(&graph, params.spur_len_m);
    if simplified.is_empty() {
        return Ok(simplified);
    }
    assign_speeds(&simplified, mask, params.patch_radius_px)
}
