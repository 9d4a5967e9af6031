use std::fs;

use deltajet::witt::{cache_file, clear_memory, generate, set_cache_dir, universal_polys, CACHE_VERSION};

// one test owns the process-wide cache directory
#[test]
fn disk_cache_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    set_cache_dir(Some(dir.path().to_path_buf()));
    let (p, f, n) = (3, 1, 2);
    let path = cache_file(dir.path(), p, f, n);

    clear_memory();
    let first = universal_polys(p, f, n).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with(CACHE_VERSION));

    // a hit from disk gives the same polynomials
    clear_memory();
    assert_eq!(*universal_polys(p, f, n).unwrap(), *first);

    // flip one coefficient: the checksum catches it and the file is rewritten
    let tampered = text.replacen(" -1\n", " -2\n", 1);
    assert_ne!(tampered, text);
    fs::write(&path, tampered).unwrap();
    clear_memory();
    assert_eq!(*universal_polys(p, f, n).unwrap(), generate(p, f, n).unwrap());
    assert_eq!(fs::read_to_string(&path).unwrap(), text);

    // an old version tag is treated the same way
    fs::write(&path, text.replacen(CACHE_VERSION, "deltajet-witt-cache v0", 1)).unwrap();
    clear_memory();
    assert_eq!(*universal_polys(p, f, n).unwrap(), *first);
    assert_eq!(fs::read_to_string(&path).unwrap(), text);

    // the CLI flag points the cache elsewhere
    let other = tempfile::tempdir().unwrap();
    clear_memory();
    let dir_arg = other.path().to_str().unwrap();
    let (code, _) = deltajet::cli::run(["deltajet", "witt", "polys", "--p", "2", "--n", "1", "--cache-dir", dir_arg]);
    assert_eq!(code, 0);
    assert!(cache_file(other.path(), 2, 1, 1).exists());
    set_cache_dir(None);
}
