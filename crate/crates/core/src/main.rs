fn main() {
    std::process::exit(lieder::cli::run(std::env::args_os()));
}
