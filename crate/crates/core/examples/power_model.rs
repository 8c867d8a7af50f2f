//! Chip power and energy per cycle across frequencies, for a few active-core
//! counts. Shows the static floor `c3 / f` dominating at low frequency.

use memdvfs::model::{Platform, PlatformParams};

fn main() -> memdvfs::Result<()> {
    let chip = Platform::new(PlatformParams {
        c1: 1.0e-27,
        c2: 1.0e-10,
        c3: 0.5,
        alpha: 3.0,
        k: 0.1,
        cores: 4,
        t_a: 1.0e-7,
    })?;

    println!("{:>10}  {:>4}  {:>6}  {:>12}  {:>14}", "f [GHz]", "m", "m'", "power [W]", "energy/cycle [nJ]");
    for ghz in [0.2, 0.5, 1.0, 2.0, 3.0] {
        let f = ghz * 1e9;
        for m in [1, 4] {
            println!(
                "{:>10.1}  {:>4}  {:>6.2}  {:>12.4}  {:>14.4}",
                ghz,
                m,
                chip.effective_cores(m)?.value(),
                chip.chip_power(m, f)?,
                chip.energy_per_cycle(m, f)? * 1e9
            );
        }
    }
    Ok(())
}
