#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = aquarium::square::ForcingSpec::from_json(s) else {
        return;
    };
    let _ = spec.validate();
    // modes and small grids have cheap exact coefficient paths
    match &spec {
        aquarium::square::ForcingSpec::Mode { .. } => {
            let _ = aquarium::square::sine_coeffs(&spec, 4, 0.5);
        }
        aquarium::square::ForcingSpec::Grid { values } if values.len() <= 64 => {
            let _ = aquarium::square::sine_coeffs(&spec, 4, 0.5);
        }
        _ => {}
    }
});
