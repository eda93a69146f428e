use ising_core::exact::{enumerate, format_golden, ground_states, spec_id, GoldenRow, CRITICAL_TEMPERATURE};

use crate::cli::ExactArgs;
use crate::commands::{resolve_spec, Context};
use crate::error::{flag_error, CliError};

pub fn run(ctx: &Context, args: ExactArgs) -> Result<(), CliError> {
    let spec = resolve_spec(ctx, &args.lattice, "4x4")?;
    if args.ground_state {
        let (energy, degeneracy) = ground_states(&spec).map_err(flag_error("--size"))?;
        println!("spec_id,ground_energy,degeneracy");
        println!("{},{energy},{degeneracy}", spec_id(&spec));
        return Ok(());
    }
    let temps = if args.temps.is_empty() {
        vec![CRITICAL_TEMPERATURE]
    } else {
        args.temps
    };
    let mut rows = Vec::with_capacity(temps.len());
    for t in temps {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Usage(format!("--temp: must be positive and finite, got {t}")));
        }
        let exact = enumerate(&spec, t).map_err(flag_error("--size"))?;
        rows.push(GoldenRow::from_exact(&spec, &exact));
    }
    print!("{}", format_golden(&rows));
    Ok(())
}
