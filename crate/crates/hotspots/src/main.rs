fn main() { hotspots::cli::main_entry() }
