fn main() {
    std::process::exit(annealing_paths::cli::run(std::env::args_os()));
}
