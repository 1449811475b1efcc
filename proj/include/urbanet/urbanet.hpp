#pragma once

#include "urbanet/centrality.hpp"
#include "urbanet/communities.hpp"
#include "urbanet/error.hpp"
#include "urbanet/geo.hpp"
#include "urbanet/graph.hpp"
#include "urbanet/ingest/geojson.hpp"
#include "urbanet/ingest/osm_xml.hpp"
#include "urbanet/ingest/profiles.hpp"
#include "urbanet/io/serialize.hpp"
#include "urbanet/multilayer.hpp"
#include "urbanet/routing.hpp"
#include "urbanet/spatial_grid.hpp"
