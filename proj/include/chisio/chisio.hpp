#pragma once

// Everything except the HTTP service (chisio/service.hpp), which pulls in
// cpp-httplib and nlohmann/json.

#include <chisio/geometry.hpp>
#include <chisio/graphml.hpp>
#include <chisio/layout/circular.hpp>
#include <chisio/layout/cise.hpp>
#include <chisio/layout/cluster.hpp>
#include <chisio/layout/cose.hpp>
#include <chisio/layout/crossing.hpp>
#include <chisio/layout/layout.hpp>
#include <chisio/layout/lstructure.hpp>
#include <chisio/layout/registry.hpp>
#include <chisio/layout/sugiyama.hpp>
#include <chisio/model.hpp>
#include <chisio/rng.hpp>
#include <chisio/svg.hpp>
