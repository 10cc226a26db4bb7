//! The rational string parser must never panic and must round-trip
//! through its canonical display.
#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = dehnkit::exactnum::parse_rational(s) {
        let shown = dehnkit::exactnum::fmt_rat(&r);
        let again = dehnkit::exactnum::parse_rational(&shown).expect("canonical form reparses");
        assert_eq!(again, r);
    }
});
