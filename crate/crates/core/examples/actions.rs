//! Lipschitz constant, projection checks and quasi-stabilizers of the
//! shipped actions.

use coarse_cover::action::{quasi_stabilizer, verify_lipschitz, ActionBundle, Abelianization, CoordinateShift};
use coarse_cover::group::{ball_with_metric_radius, Heisenberg, IntegerLattice};
use coarse_cover::metric::{Distance, IntVector};
use coarse_cover::Limits;

fn main() -> coarse_cover::Result<()> {
    let window = ball_with_metric_radius(IntegerLattice::new(2), 4, 8, Limits::default())?;
    let bundle = ActionBundle::over_ball(CoordinateShift::new(2, 1)?, window, IntVector(vec![0]))?;
    let lip = verify_lipschitz(&bundle, bundle.group_window(), 200, 1)?;
    println!(
        "Z^2 on Z: lambda = {}, {} generator steps, max ratio {}, holds = {}",
        bundle.lambda(),
        lip.steps_checked,
        lip.max_step_ratio,
        lip.holds()
    );
    for r in 0..=3 {
        let qs = quasi_stabilizer(&bundle, Distance::integer(r), bundle.group_window())?;
        println!("  W_{r}(x0) inside the ball of radius 4: {} elements", qs.len());
    }

    let window = ball_with_metric_radius(Heisenberg, 4, 8, Limits::default())?;
    let bundle = ActionBundle::over_ball(Abelianization::new(), window, IntVector(vec![0, 0]))?;
    let qs = quasi_stabilizer(&bundle, Distance::ZERO, bundle.group_window())?;
    let center: Vec<String> = qs.members().iter().map(|g| g.to_string()).collect();
    println!("H3(Z) on Z^2: lambda = {}, W_0(x0) = {}", bundle.lambda(), center.join(" "));
    Ok(())
}
