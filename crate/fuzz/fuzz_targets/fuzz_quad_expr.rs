//! Quadratic field expressions ("a/b+c/d*sqrt(D)") must never panic; any
//! accepted value must survive a display/parse round trip.
#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.len() > 4096 {
        return;
    }
    if let Ok(q) = dehnkit::exactnum::parse_quad(s) {
        let again = dehnkit::exactnum::parse_quad(&q.to_string()).expect("display reparses");
        assert_eq!(again, q);
    }
});
