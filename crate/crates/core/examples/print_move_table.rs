fn main() { print!("{}", welded::pd::table::move_table().to_text()); }
