//! Scenarios bundled with the library, one per theorem or corollary.

use crate::error::{Error, Result};
use crate::scenario::Scenario;

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        /// `(file name, contents)` of every bundled scenario.
        pub const FILES: &[(&str, &str)] = &[
            $(($name, include_str!(concat!("../scenarios/", $name)))),*
        ];
    };
}

bundled!(
    "cor_3_1_capacity.scn",
    "cor_3_2_pommerenke.scn",
    "cor_3_3_nehari.scn",
    "cor_3_3_pick.scn",
    "cor_3_4_schwarzian.scn",
    "cor_3_5_arcs.scn",
    "cor_3_6_boundary.scn",
    "cor_3_7_annulus.scn",
    "cor_5_1_strip.scn",
    "cor_5_1_strip_shift.scn",
    "cor_5_2_halfplane.scn",
    "cor_5_2_multiplicity.scn",
    "cor_5_3_quarterplane.scn",
    "major_3_1_arcs.scn",
    "major_3_2_arcs.scn",
    "thm_4_1_lindelof.scn",
    "thm_4_1_lindelof_contraction.scn",
    "thm_4_2_radius.scn",
    "thm_4_2_radius_two_preimages.scn",
    "thm_4_3_pvalent.scn",
    "twopoint21_arcs.scn",
    "twopoint21_mobius.scn",
    "twopoint22_contraction.scn",
    "twopoint22_mobius.scn",
);

/// Parse every bundled scenario.
pub fn bundled() -> Result<Vec<Scenario>> {
    FILES
        .iter()
        .map(|(name, text)| {
            Scenario::parse(text).map_err(|e| Error::InvalidScenario(format!("{name}: {e}")))
        })
        .collect()
}

/// A bundled scenario by file name or id.
pub fn find(name: &str) -> Option<Scenario> {
    FILES
        .iter()
        .find(|(file, _)| *file == name || file.trim_end_matches(".scn") == name)
        .and_then(|(_, text)| Scenario::parse(text).ok())
}
