#pragma once

#include "netcert/bounds.hpp"
#include "netcert/certify.hpp"
#include "netcert/errors.hpp"
#include "netcert/harness.hpp"
#include "netcert/hybrid.hpp"
#include "netcert/io.hpp"
#include "netcert/protocol.hpp"
#include "netcert/qcore.hpp"
