fn main() {
    std::process::exit(rmdp::cli::run(std::env::args_os()));
}
