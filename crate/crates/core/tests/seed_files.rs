use std::path::PathBuf;

use bgw_core::dmfile::MatrixFile;
use bgw_core::seeds::{seed_matrices, sha256_hex, SEED_CHECKSUMS, SEED_U, SEED_V, SEED_Y};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

#[test]
fn shipped_files_match_embedded_seeds() {
    for ((file, text), sum) in [
        ("seed_u.dm", SEED_U),
        ("seed_v.dm", SEED_V),
        ("seed_y.dm", SEED_Y),
    ]
    .into_iter()
    .zip(SEED_CHECKSUMS)
    {
        let bytes = std::fs::read_to_string(data(file)).unwrap();
        assert_eq!(bytes, text, "{file}");
        assert_eq!(sha256_hex(bytes.as_bytes()), sum, "{file}");
        let parsed = MatrixFile::read(&data(file)).unwrap();
        assert_eq!(parsed.to_text(), bytes);
    }
}

#[test]
fn files_decode_to_the_seed_triple() {
    let s = seed_matrices();
    let u = MatrixFile::read(&data("seed_u.dm"))
        .unwrap()
        .to_signed()
        .unwrap();
    let y = MatrixFile::read(&data("seed_y.dm"))
        .unwrap()
        .to_signed()
        .unwrap();
    assert_eq!(u, s.u);
    assert_eq!(y, s.y);
}
