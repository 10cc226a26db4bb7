//! 4x4 and 2x2 matrix files are untrusted input: decoding must never
//! panic, and decoded matrices must re-encode losslessly.
#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() > 1 << 16 {
        return;
    }
    if let Ok(m) = dehnkit::report::parse_mat4_json(data) {
        let encoded = serde_json::to_vec(&dehnkit::report::mat4_value(&m)).unwrap();
        let again = dehnkit::report::parse_mat4_json(&encoded).expect("re-encoding reparses");
        assert_eq!(again, m);
        // classification must be total on arbitrary rational matrices
        let block = dehnkit::blocktype::BlockMat::from_mat4(&m);
        let _ = dehnkit::blocktype::classify_type(&block);
        let _ = dehnkit::catalog::match_catalog(&block);
    }
    let _ = dehnkit::report::parse_mat2_json(data);
});
