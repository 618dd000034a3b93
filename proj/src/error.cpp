#include "spherekern/error.hpp"

namespace spherekern {

void throw_domain(const std::string& what) { throw DomainError(what); }

}  // namespace spherekern
