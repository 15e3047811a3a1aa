fn main() -> std::process::ExitCode {
    sgmix::cli::main()
}
