//! Generator files are JSON lists of matrices; decoding and a capped
//! closure must never panic.
#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 1 << 16 {
        return;
    }
    if let Ok(gens) = dehnkit::report::parse_matrix_list_json(data) {
        if gens.len() <= 4 {
            let _ = dehnkit::groups::closure(&gens, 64);
        }
    }
});
