#![no_main]
use libfuzzer_sys::fuzz_target;

// RunConfig json is reparsed from CSV comment headers; arbitrary bytes must
// produce a clean error, never a panic.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    match aquarium_cli::config::RunConfig::from_json(s) {
        Ok(cfg) => {
            // a successful parse must survive the round trip
            let json = cfg.to_json();
            let again = aquarium_cli::config::RunConfig::from_json(&json).unwrap();
            assert_eq!(cfg, again);
        }
        Err(_) => {}
    }
});
