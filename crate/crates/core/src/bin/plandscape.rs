fn main() -> std::process::ExitCode {
    plandscape::cli::main()
}
