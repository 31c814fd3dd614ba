//! Print the headline numbers of all three torsion cases.

use godeaux_core::report::Context;

fn main() -> Result<(), godeaux_core::GodeauxError> {
    for nu in [5u32, 4, 3] {
        let ctx = Context::build(nu)?;
        let strata: usize = ctx
            .table
            .rows
            .iter()
            .flat_map(|r| r.families.iter())
            .map(|f| f.components)
            .sum();
        println!(
            "nu = {}: |H| = {:>3}, {} label rows, {} strata in {} components, {} of {} inertia components effective",
            nu,
            ctx.ambient_order,
            ctx.table.rows.len(),
            strata,
            ctx.diagram.nodes.len(),
            ctx.inertia.effective().count(),
            ctx.inertia.components.len(),
        );
    }
    Ok(())
}
