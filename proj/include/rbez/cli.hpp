#pragma once

#include <iosfwd>

namespace rbez {

// Exit codes: 0 ok, 2 bad input, 3 not certified, 4 numerical failure.
int run(int argc, char** argv);
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace rbez
