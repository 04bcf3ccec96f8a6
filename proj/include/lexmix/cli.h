#ifndef LEXMIX_CLI_H_
#define LEXMIX_CLI_H_

#include <string>
#include <vector>

namespace lexmix::cli {

// Exit codes: 0 success, 2 usage or validation failure, 3 runtime data
// error, 1 internal error.
int run(int argc, const char* const* argv);
int run(std::vector<std::string> args);  // args excludes argv[0]

}  // namespace lexmix::cli

#endif  // LEXMIX_CLI_H_
