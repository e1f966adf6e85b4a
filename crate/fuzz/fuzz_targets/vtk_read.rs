#![no_main]

use libfuzzer_sys::fuzz_target;
use pulsewall::export::read_vtk;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(vtk) = read_vtk(text) {
        // Accepted files must be internally consistent.
        for c in &vtk.cells {
            assert!(c.iter().all(|&v| v < vtk.points.len()));
        }
        assert!(vtk.pressure.is_empty() || vtk.pressure.len() == vtk.points.len());
        assert!(vtk.velocity.is_empty() || vtk.velocity.len() == vtk.points.len());
    }
});
