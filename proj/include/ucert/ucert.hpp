#ifndef UCERT_UCERT_HPP
#define UCERT_UCERT_HPP

#include "ucert/field.hpp"
#include "ucert/hermitian.hpp"
#include "ucert/unitary.hpp"
#include "ucert/linalg.hpp"
#include "ucert/perm.hpp"
#include "ucert/random.hpp"
#include "ucert/meataxe.hpp"
#include "ucert/certify.hpp"

#endif // UCERT_UCERT_HPP
