#include "powertwin/error.hpp"

namespace powertwin {

void throw_io(const std::string& what)
{
    throw IoError(what);
}

} // namespace powertwin
