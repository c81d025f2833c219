//! Tight Gabor frames on Z_N × Z_N.

use gml::phase_space::{frame_bounds, stft, synthesize, GaborSystem, Signal};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gml::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for n in [5, 7, 11] {
        for (name, g) in [
            ("delta", Signal::delta(n, 0)),
            ("gaussian", Signal::periodized_gaussian(n, 1.0)),
            ("random", Signal::random(n, &mut rng)),
        ] {
            let sys = GaborSystem::new(g)?;
            let (a, b) = frame_bounds(&sys);
            println!("N={n:2} {name:8} A={a:.6} B={b:.6} N‖g‖²={:.6}", sys.frame_constant());
        }
    }
    let sys = GaborSystem::gaussian(7);
    let f = Signal::random(7, &mut rng);
    let back = synthesize(&stft(&f, sys.window())?, &sys)?;
    println!("Parseval round trip error {:.2e}", back.sub(&f).norm());
    Ok(())
}
