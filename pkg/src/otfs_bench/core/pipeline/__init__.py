# Trial pipeline package
