use pyo3::prelude::*;

#[pymodule]
fn anofel_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
