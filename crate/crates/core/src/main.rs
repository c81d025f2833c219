fn main() {
    if let Ok(n) = std::env::var("GML_THREADS") {
        match n.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("GML_THREADS must be a positive integer, got {n:?}");
                std::process::exit(gml::cli::EXIT_CONFIG);
            }
        }
    }
    std::process::exit(gml::cli::main_with_args(std::env::args_os()));
}
