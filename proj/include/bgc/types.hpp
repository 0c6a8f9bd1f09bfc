#pragma once

#include <cstdint>

namespace bgc {

// Vertex ids are dense per side. 32-bit ids cover every graph we target;
// configure -DBGC_WIDE_IDS for address-space-bound instances.
#ifdef BGC_WIDE_IDS
using vertex_id = std::uint64_t;
#else
using vertex_id = std::uint32_t;
#endif

inline constexpr vertex_id invalid_vertex = static_cast<vertex_id>(-1);

}  // namespace bgc
