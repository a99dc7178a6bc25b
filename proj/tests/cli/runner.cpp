// Runs one case of cases.tsv against the CLI and checks exit code and output.
#include <sys/wait.h>
#include <unistd.h>

#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace {

std::vector<std::string> split(const std::string &line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, '\t'))
    out.push_back(f);
  return out;
}

void expand(std::string &s, const std::string &key, const std::string &value) {
  for (auto p = s.find(key); p != std::string::npos; p = s.find(key))
    s.replace(p, key.size(), value);
}

} // namespace

int main(int argc, char **argv) {
  if (argc != 6) {
    std::cerr << "usage: cli_runner CLI CASES NAME SRC_DIR DATA_DIR\n";
    return 2;
  }
  std::ifstream in(argv[2]);
  std::vector<std::string> c;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#' && (c = split(line))[0] == argv[3])
      break;
  if (c.empty() || c[0] != argv[3]) {
    std::cerr << "no case " << argv[3] << "\n";
    return 2;
  }
  c.resize(std::max<std::size_t>(c.size(), 3));
  int want = std::stoi(c[1]);
  std::vector<std::string> args = {argv[1]};
  for (std::size_t k = 3; k < c.size(); ++k) {
    expand(c[k], "@SRC@", argv[4]);
    expand(c[k], "@DATA@", argv[5]);
    args.push_back(c[k]);
  }

  int fd[2];
  if (pipe(fd) != 0)
    return 2;
  pid_t pid = fork();
  if (pid == 0) {
    dup2(fd[1], 1);
    dup2(fd[1], 2);
    close(fd[0]);
    std::vector<char *> av;
    for (auto &a : args)
      av.push_back(a.data());
    av.push_back(nullptr);
    execv(av[0], av.data());
    _exit(127);
  }
  close(fd[1]);
  std::string out;
  char buf[4096];
  for (ssize_t n; (n = read(fd[0], buf, sizeof buf)) > 0;)
    out.append(buf, n);
  int status = 0;
  waitpid(pid, &status, 0);
  int got = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::cout << out;
  bool ok = true;
  if (got != want) {
    std::cerr << "exit code " << got << ", expected " << want << "\n";
    ok = false;
  }
  if (!c[2].empty() && !std::regex_search(out, std::regex(c[2]))) {
    std::cerr << "output does not match /" << c[2] << "/\n";
    ok = false;
  }
  return ok ? 0 : 1;
}
