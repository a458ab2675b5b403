//! Stress the duality bound `F(w) + F(v) <= N` over random probes and
//! random orthogonal direction pairs, and confirm both saturation families:
//! GHZ probes along the phase sum, and two-qubit equatorial probes for
//! every direction pair.
//!
//! ```bash
//! cargo run --example duality_campaign
//! QFI_LAB_THREADS=1 cargo run --example duality_campaign   # same numbers
//! ```

use qfi_lab::duality::{
    ghz_certificate, random_duality_campaign, rank1_uniqueness_check, separable_certificate,
};
use qfi_lab::{ProbeState, Result};

fn main() -> Result<()> {
    let seed = 7;
    for n in 2..=6 {
        let summary = random_duality_campaign(n, 1000, seed)?;
        print!(
            "n={n}: {} probes, violations {}, max sum {:.6} (bound {})",
            summary.num_states, summary.violations, summary.max_sum, n
        );
        if let Some(eq) = &summary.equatorial {
            print!(", equatorial max |sum-2| = {:.2e}", eq.max_sum_deviation);
        }
        println!();
    }

    let ghz = ghz_certificate(6)?;
    println!(
        "\nGHZ certificate (n=6): passed {}, F(sum) = {:.9}, max complement QFI = {:.2e}",
        ghz.passed, ghz.qfi_sum, ghz.max_complement_qfi
    );
    let sep = separable_certificate(6, 20, seed)?;
    println!(
        "separable certificate (n=6): passed {}, max |F - I| = {:.2e}",
        sep.passed, sep.max_identity_deviation
    );

    // the rank-1 signature singles out GHZ among equatorial probes
    println!(
        "rank-1 uniqueness: GHZ {}, |+> product {}",
        rank1_uniqueness_check(&ProbeState::ghz(4)?, 1e-10)?,
        rank1_uniqueness_check(&ProbeState::plus_product(4)?, 1e-10)?,
    );
    Ok(())
}
