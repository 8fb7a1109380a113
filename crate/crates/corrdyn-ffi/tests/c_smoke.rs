//! Compiles and runs a small C program against the generated header and the
//! static library, exercising the ABI end to end from C.

use std::path::PathBuf;
use std::process::Command;

const C_PROGRAM: &str = r#"
#include <stdio.h>
#include <math.h>
#include "corrdyn.h"

int main(void) {
    CorrdynPower *power = NULL;
    if (corrdyn_power_new(3, 2, 0.0, 0.0, &power) != CORRDYN_STATUS_OK) return 1;
    if (fabs(corrdyn_power_escape_radius(power) - 4.0) > 1e-12) return 2;

    double values[4];
    size_t len = 0;
    if (corrdyn_power_forward(power, 1.0, 0.0, values, NULL, 2, &len) != CORRDYN_STATUS_OK)
        return 3;
    if (len != 2) return 4;

    CorrdynVerdict verdict;
    if (corrdyn_power_filled_verdict(power, 0.5, 0.0, 40, 1000000, 0.0, &verdict)
        != CORRDYN_STATUS_OK) return 5;
    if (verdict != CORRDYN_VERDICT_BOUNDED) return 6;
    corrdyn_power_free(power);

    CorrdynMating *mating = NULL;
    if (corrdyn_mating_new(5.0, 0.0, false, &mating) != CORRDYN_STATUS_OK) return 7;
    double pts[8], muls[8];
    CorrdynPointClass classes[4];
    if (corrdyn_mating_fixed_points(mating, pts, muls, classes, 4, &len) != CORRDYN_STATUS_OK)
        return 8;
    if (len != 3) return 9;
    corrdyn_mating_free(mating);

    unsigned char digits[8];
    if (corrdyn_sturmian_word(1, 3, digits, 8, &len) != CORRDYN_STATUS_OK) return 10;
    if (len != 3 || digits[0] + digits[1] + digits[2] != 1) return 11;

    double cre, cim, radius;
    if (corrdyn_yoccoz_disk(1, 2, false, 0, 0, &cre, &cim, &radius) != CORRDYN_STATUS_OK)
        return 12;
    if (fabs(radius - log(3.0) / 2.0) > 1e-12) return 13;

    printf("c smoke ok\n");
    return 0;
}
"#;

#[test]
fn c_program_links_and_runs() {
    if Command::new("cc").arg("--version").output().is_err() {
        panic!("no C compiler available for the ABI smoke test");
    }
    // The test executable sits in target/<profile>/deps; the staticlib is
    // there too (or one level up after a plain build).
    let exe = std::env::current_exe().unwrap();
    let deps = exe.parent().unwrap();
    let staticlib = [deps.join("libcorrdyn_ffi.a"), deps.parent().unwrap().join("libcorrdyn_ffi.a")]
        .into_iter()
        .find(|p| p.exists())
        .expect("static library not found next to the test executable");
    let include_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    assert!(include_dir.join("corrdyn.h").exists(), "header not generated");

    let work = tempfile::tempdir().unwrap();
    let src = work.path().join("smoke.c");
    std::fs::write(&src, C_PROGRAM).unwrap();
    let bin = work.path().join("smoke");

    let compile = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include_dir)
        .arg(&staticlib)
        .args(["-lm", "-lpthread", "-ldl"])
        .arg("-o")
        .arg(&bin)
        .output()
        .expect("run cc");
    assert!(
        compile.status.success(),
        "compilation failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&bin).output().expect("run smoke binary");
    assert!(
        run.status.success(),
        "smoke binary exited {:?}: {}",
        run.status.code(),
        String::from_utf8_lossy(&run.stdout)
    );
    assert!(String::from_utf8_lossy(&run.stdout).contains("c smoke ok"));
}
