//! Column subset selection: DEIM, the partitioned combiner, CUR and the
//! error diagnostics.

mod bounds;
mod cur;
mod deim;
mod partitioned;
mod select;

pub use bounds::{
    bound_report, bound_report_with_spectrum, reconstruction_error, tail_error, BoundReport,
    Inequality,
};
pub use cur::{cur_decompose, CurDecomposition, CurReport};
pub use deim::deim_select;
pub use partitioned::{partitioned_deim, SelectionResult, SetBlock};
pub use select::{
    select_columns, select_columns_with_spectrum, ColumnSelection, Method, SelectionConfig,
    SketchMode, SketchSpec,
};
