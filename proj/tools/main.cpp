// Placeholder CLI; subcommands land with the bench module.
int main() { return 0; }
