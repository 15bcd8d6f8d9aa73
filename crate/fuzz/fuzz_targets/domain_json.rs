#![no_main]
use libfuzzer_sys::fuzz_target;

// Domain specs arrive from --domain flags and @files; parsing and curve
// construction must never panic on malformed input.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = aquarium::geometry::DomainSpec::from_json(s) else {
        return;
    };
    if let Ok(curve) = spec.build() {
        // exercise evaluation paths, including the wrap-around
        let _ = curve.point(0.0);
        let _ = curve.point(0.73);
        let _ = curve.point(-2.5);
        let _ = curve.is_polygon();
    }
});
