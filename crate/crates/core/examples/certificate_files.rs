// Write summands and a certificate to disk, then check them from the files alone.

use pmdecomp::decompose::{decompose, Options};
use pmdecomp::fixtures;
use pmdecomp::report::{verify_dir, write_artifacts};

pub fn run_example() -> (usize, bool) {
    let m = fixtures::linked_triple();
    let d = decompose(&m, &Options::default()).expect("decomposes");
    let dir = std::env::temp_dir().join(format!("pmdecomp-certificate-{}", std::process::id()));
    let files = write_artifacts(&dir, &d).expect("writable temp dir");
    let ok = verify_dir(&m, &dir).is_ok();
    println!("wrote {} summands to {}, verified: {ok}", files.len(), dir.display());
    let _ = std::fs::remove_dir_all(&dir);
    (files.len(), ok)
}

#[allow(dead_code)]
fn main() {
    run_example();
}
