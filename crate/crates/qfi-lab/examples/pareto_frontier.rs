//! Trace the two-qubit precision-privacy frontier along the Bell family
//! `cos(phi)|Phi+> + sin(phi)|Psi+>` and emit a plot-ready CSV table.
//!
//! ```bash
//! cargo run --example pareto_frontier > frontier.csv
//! ```
//!
//! Every point sits exactly on the conservation line
//! `F(sum) + F(difference) = 2`: the family sweeps from the co-optimal
//! corner (2, 0) through the separable midpoint (1, 1) to (0, 2).

use qfi_lab::duality::frontier_sweep;
use qfi_lab::Result;

fn main() -> Result<()> {
    println!("phi,qfi_w,qfi_v");
    for p in frontier_sweep(101)? {
        println!("{:.16e},{:.16e},{:.16e}", p.phi, p.qfi_w, p.qfi_v);
    }
    Ok(())
}
