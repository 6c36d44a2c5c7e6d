//! A blank-relabelling code on X_k split as ψ2 ∘ ψ1 through Y_{m,0}, and
//! checked site by site on x_ω windows.

use sftlab::factor::{check_decomposition, hochman_code, level_square_images, CodeKind};
use sftlab::hochman::{build_x_omega_window, BlankLabels, OmegaPrefix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let k = 4;
    let windows = (0..20u64)
        .map(|s| build_x_omega_window(&OmegaPrefix::random(24, s), 30, k, &BlankLabels::Seeded(s)))
        .collect::<Result<Vec<_>, _>>()?;
    for kind in [CodeKind::Collapse, CodeKind::Parity, CodeKind::Identity] {
        let c = hochman_code(kind, k, 0)?;
        let images = level_square_images(&c, 0, k)?;
        let r = check_decomposition(&c, 0, k, &windows)?;
        println!(
            "{kind:?}: m = {}, {} sites compared, {} mismatches, passed {}",
            images.len(),
            r.sites_compared,
            r.mismatches,
            r.passed()
        );
    }
    Ok(())
}
