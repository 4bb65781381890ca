"""Locally asymmetric colourings of bounded-degree graphs."""
