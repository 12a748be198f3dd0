//! Every bundled scenario reproduces its golden text byte for byte.
//! Regenerate with `PADEPDE_BLESS=1 padepde corpus --symbolic-only`.

use padepde::phi4corpus::catalog;

#[test]
fn canonical_output_matches_golden_files() {
    for sc in catalog() {
        let text = sc.canonical_text().unwrap_or_else(|e| panic!("{}: {e}", sc.name));
        assert_eq!(text, sc.golden, "{} drifted from corpus/golden/{}.txt", sc.name, sc.slug);
    }
}

#[test]
fn goldens_on_disk_match_the_embedded_copies() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus/golden");
    for sc in catalog() {
        let disk = std::fs::read_to_string(dir.join(format!("{}.txt", sc.slug))).unwrap();
        assert_eq!(disk, sc.golden, "{}", sc.slug);
    }
}
